"""Pairs, potential log discrepancies, redundant points, and the
anticanonical minimal model runner.

A PairModel couples a surface model with an effective boundary supported on
tracked curves.  Everything downstream studies D = -(K + boundary): its
Zariski decomposition, the asymptotic orders sigma along blow-up chains,
the potential log discrepancy abar = A - sigma, redundancy of points
(mult_p(N + boundary) >= 1), and the D-negative contraction sequence.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Mapping, Sequence, Union

from .birational import (
    ChainPoint,
    PointSpec,
    SurfaceModel,
    chain_log_discrepancy,
    chain_names,
)
from .errors import InvariantViolationError, NotRedundantError
from .lattice import DivisorClass, Rational, rational
from .zariski import ZariskiDecomp, sigma, transport_redundant, zariski_decompose

_ZERO = Fraction(0)
_ONE = Fraction(1)


class PairModel:
    """A surface model with an effective boundary, coefficients in [0, 1].

    Construction eagerly decomposes -(K + boundary); a pair whose
    anticanonical class admits no decomposition within the tracked curves
    is rejected.
    """

    def __init__(self, surface: SurfaceModel, boundary: Mapping[str, Rational] = ()):
        items = boundary.items() if isinstance(boundary, Mapping) else boundary
        coefficients: dict[str, Fraction] = {}
        for name, coeff in items:
            surface.curve(name)
            coeff = rational(coeff)
            if coeff < 0 or coeff > 1:
                raise InvariantViolationError(
                    f"boundary coefficient on {name!r} must lie in [0, 1], got {coeff}"
                )
            if coeff != 0:
                coefficients[name] = coeff
        self.surface = surface
        self.boundary = {
            name: coefficients[name]
            for name in sorted(coefficients, key=surface.curve_index.__getitem__)
        }
        self._decomposition = zariski_decompose(surface, self.anti_log_canonical_class())

    @cached_property
    def boundary_class(self) -> DivisorClass:
        return self.surface.class_of_combination(self.boundary)

    def anti_log_canonical_class(self) -> DivisorClass:
        return -(self.surface.canonical + self.boundary_class)

    def decomposition(self) -> ZariskiDecomp:
        return self._decomposition

    def boundary_coefficient(self, name: str) -> Fraction:
        self.surface.curve(name)
        return self.boundary.get(name, _ZERO)

    def boundary_multiplicity(self, point: PointSpec | Mapping[str, int]) -> Fraction:
        point = PointSpec.ensure(point)
        return sum(
            (rational(m) * self.boundary.get(n, _ZERO) for n, m in point.incidences),
            _ZERO,
        )

    def is_boundary_klt(self) -> bool:
        return all(coeff < 1 for coeff in self.boundary.values())


Chain = Union[str, Sequence[ChainPoint]]


def potential_log_discrepancy(
    pair: PairModel,
    chain: Chain,
    names: Sequence[str] | None = None,
) -> Fraction:
    """abar = A(pair; E) - sigma_E(-(K + boundary)) for the last chain divisor.

    A curve name computes the depth-zero value: A = 1 - boundary coefficient
    and sigma is the curve's coefficient in the negative part.
    """
    surface = pair.surface
    if isinstance(chain, str):
        log_disc = _ONE - pair.boundary_coefficient(chain)
        return log_disc - pair.decomposition().coefficient(chain)
    chain = list(chain)
    if names is None:
        names = chain_names(surface, len(chain))
    log_disc = chain_log_discrepancy(surface, chain, boundary=pair.boundary, names=names)
    order = sigma(surface, pair.anti_log_canonical_class(), chain, names=names)
    return log_disc - order


@dataclass(frozen=True)
class RedundancyVerdict:
    """Outcome of the redundant-point test with its two multiplicities."""

    redundant: bool
    mult_negative: Fraction
    mult_boundary: Fraction

    @property
    def total(self) -> Fraction:
        return self.mult_negative + self.mult_boundary

    def __bool__(self) -> bool:
        return self.redundant


def is_redundant_point(pair: PairModel, point: PointSpec | Mapping[str, int]) -> RedundancyVerdict:
    """A point is redundant when mult_p(N + boundary) >= 1."""
    point = PointSpec.ensure(point)
    for name, _ in point.incidences:
        pair.surface.curve(name)
    negative = pair.decomposition().negative_coeffs
    mult_n = sum(
        (rational(m) * negative.get(n, _ZERO) for n, m in point.incidences), _ZERO
    )
    mult_b = pair.boundary_multiplicity(point)
    return RedundancyVerdict(mult_n + mult_b >= 1, mult_n, mult_b)


def redundant_blow_up(
    pair: PairModel,
    point: PointSpec | Mapping[str, int],
    name: str | None = None,
) -> tuple[PairModel, ZariskiDecomp]:
    """Blow up a redundant point, returning the new pair and the transported
    decomposition.

    The boundary moves by strict transform (the exceptional enters with
    coefficient zero); the decomposition moves by the closed formula and
    agrees with recomputation on the new pair.
    """
    point = PointSpec.ensure(point)
    verdict = is_redundant_point(pair, point)
    if not verdict:
        raise NotRedundantError(
            f"point {point} has mult_p(N + boundary) = {verdict.total} < 1"
        )
    transported = transport_redundant(
        pair.decomposition(), point, verdict.mult_boundary, name=name
    )
    new_pair = PairModel(transported.model, dict(pair.boundary))
    return new_pair, transported


@dataclass(frozen=True)
class MMPStep:
    """One divisorial contraction of the anticanonical program."""

    index: int
    curve: str
    self_intersection: Fraction
    canonical_degree: Fraction
    anti_degree: Fraction
    boundary_coefficient: Fraction
    discrepancy: Fraction
    exceptional_coefficient: Fraction
    decomposition: ZariskiDecomp
    result: PairModel
    was_smooth: bool


@dataclass(frozen=True)
class MMPTrace:
    """Full record of a run: per-step data plus end-model verdicts."""

    initial: PairModel
    steps: tuple[MMPStep, ...]
    final_pair: PairModel
    final_model_nef: bool
    final_klt: bool
    total_discrepancies: dict[str, Fraction]

    @property
    def contracted(self) -> tuple[str, ...]:
        return tuple(step.curve for step in self.steps)

    @property
    def max_negative_coefficient(self) -> Fraction | None:
        seen = [
            coeff
            for step in self.steps
            for coeff in step.decomposition.negative_coeffs.values()
        ]
        seen.extend(self.final_pair.decomposition().negative_coeffs.values())
        return max(seen) if seen else None


def run_anticanonical_mmp(pair: PairModel) -> MMPTrace:
    """Contract -(K + boundary)-negative curves until the class is model-nef.

    Each step contracts the single support curve with the most negative
    degree against -(K + boundary) (ties break to the lowest curve index),
    pushing the boundary and nef axioms to the quotient.  The end verdicts
    come from one exact solve for the total contraction on the starting
    surface.
    """
    steps: list[MMPStep] = []
    current = pair
    budget = len(pair.surface.curves)
    while True:
        decomposition = current.decomposition()
        if not decomposition.negative_coeffs:
            break
        if len(steps) >= budget:
            raise InvariantViolationError("contraction sequence exceeded curve count")
        surface = current.surface
        anti = current.anti_log_canonical_class()
        chosen = None
        for name in decomposition.negative_coeffs:
            degree = surface.pair(anti, surface.curve_class(name))
            key = (degree, surface.curve_index[name])
            if chosen is None or key < chosen[0]:
                chosen = (key, name, degree)
        _, name, degree = chosen
        if degree >= 0:
            raise InvariantViolationError(
                f"support curve {name!r} is not -(K + boundary)-negative"
            )
        curve_cls = surface.curve_class(name)
        self_int = surface.pair(curve_cls, curve_cls)
        k_degree = surface.pair(surface.canonical, curve_cls)
        delta = current.boundary_coefficient(name)
        result = surface.contract([name])
        discrepancy = (
            surface.pair(surface.canonical + current.boundary_class, curve_cls)
            - delta * self_int
        ) / self_int
        exceptional_coefficient = degree / self_int
        descended = result.pull_back(result.push_forward(anti))
        if descended + curve_cls.scale(exceptional_coefficient) != anti:
            raise InvariantViolationError(
                "pushforward identity failed for -(K + boundary) at step"
                f" {len(steps)} ({name!r})"
            )
        new_boundary = {k: v for k, v in current.boundary.items() if k != name}
        new_pair = PairModel(result.model, new_boundary)
        steps.append(
            MMPStep(
                index=len(steps),
                curve=name,
                self_intersection=self_int,
                canonical_degree=k_degree,
                anti_degree=degree,
                boundary_coefficient=delta,
                discrepancy=discrepancy,
                exceptional_coefficient=exceptional_coefficient,
                decomposition=decomposition,
                result=new_pair,
                was_smooth=surface.smooth,
            )
        )
        current = new_pair
    total = _total_discrepancies(pair, [step.curve for step in steps])
    final_klt = all(a > -1 for a in total.values()) and current.is_boundary_klt()
    return MMPTrace(
        initial=pair,
        steps=tuple(steps),
        final_pair=current,
        final_model_nef=not current.decomposition().negative_coeffs,
        final_klt=final_klt,
        total_discrepancies=total,
    )


def _total_discrepancies(pair: PairModel, contracted: Sequence[str]) -> dict[str, Fraction]:
    """Discrepancies of the one-shot contraction of all MMP-contracted curves,
    relative to the pushed-forward pair: solve
    (K + surviving-boundary - sum a_i C_i) . C_j = 0 on the starting surface."""
    if not contracted:
        return {}
    surface = pair.surface
    ok, _ = surface.negative_definite_curves(list(contracted))
    if not ok:
        raise InvariantViolationError("contracted curves fail negative definiteness")
    surviving = {
        name: coeff for name, coeff in pair.boundary.items() if name not in set(contracted)
    }
    reference = surface.canonical + surface.class_of_combination(surviving)
    targets = {
        name: surface.pair(reference, surface.curve_class(name)) for name in contracted
    }
    return surface.solve_on_curves(targets)


@dataclass(frozen=True)
class PkltCertificate:
    """Sufficient certificate: the program ends model-nef on a klt pair and
    never sees a negative-part coefficient reach 1."""

    certified: bool
    witness: MMPTrace
    max_coefficient: Fraction | None


def pklt_certificate(pair: PairModel) -> PkltCertificate:
    trace = run_anticanonical_mmp(pair)
    peak = trace.max_negative_coefficient
    certified = (
        trace.final_model_nef
        and trace.final_klt
        and (peak is None or peak < 1)
    )
    return PkltCertificate(certified=certified, witness=trace, max_coefficient=peak)


def enumerate_chains(
    model: SurfaceModel,
    max_depth: int,
    prefix: str = "Q",
) -> Iterator[tuple[list[dict[str, int]], list[str]]]:
    """Deterministically enumerate blow-up chains of depth 1..max_depth.

    Candidate points at each level: every pair of tracked curves whose
    current intersection is >= 1 (multiplicity one on each), then every
    single tracked curve (multiplicity one); earlier exceptionals count as
    tracked curves, so infinitely-near chains are covered.  Free points are
    omitted: their exceptionals never enter the negative part.
    """
    if max_depth < 1:
        return
    pool = chain_names(model, max_depth, prefix)

    def candidates(current: SurfaceModel) -> list[dict[str, int]]:
        found: list[dict[str, int]] = []
        curves = current.curves
        for i in range(len(curves)):
            for j in range(i + 1, len(curves)):
                if current.curve_pairings[i][j] >= 1:
                    found.append({curves[i].name: 1, curves[j].name: 1})
        for curve in curves:
            found.append({curve.name: 1})
        return found

    def descend(
        current: SurfaceModel, points: list[dict[str, int]], depth: int
    ) -> Iterator[tuple[list[dict[str, int]], list[str]]]:
        for point in candidates(current):
            chain = points + [point]
            names = pool[: len(chain)]
            yield chain, list(names)
            if depth + 1 <= max_depth:
                child = current.blow_up(point, pool[len(points)])
                yield from descend(child, chain, depth + 1)

    yield from descend(model, [], 1)


def epsilon_gap(pair: PairModel) -> Fraction | None:
    """Model-relative gap: min over tracked curves with sigma > 0 of
    (A - sigma)/sigma, or None when the anticanonical class is model-nef."""
    negative = pair.decomposition().negative_coeffs
    best: Fraction | None = None
    for name, coeff in negative.items():
        log_disc = _ONE - pair.boundary_coefficient(name)
        ratio = (log_disc - coeff) / coeff
        if best is None or ratio < best:
            best = ratio
    return best


@dataclass(frozen=True)
class ChainRatio:
    """One enumerated chain with its discrepancy, order, and ratio."""

    description: str
    log_discrepancy: Fraction
    order: Fraction


@dataclass(frozen=True)
class LctSigmaEstimate:
    """Minimum of A/sigma over the enumerated family, with the certified
    lower bound 1 + epsilon; None values mean no positive sigma was seen."""

    min_ratio: Fraction | None
    certified_lower_bound: Fraction | None
    epsilon: Fraction | None
    binding: str | None
    details: tuple[ChainRatio, ...] = ()


def _describe_chain(points: Sequence[Mapping[str, int]]) -> str:
    return "; ".join(
        ",".join(f"{n}:{m}" for n, m in sorted(point.items())) for point in points
    )


def lct_sigma_estimate(
    pair: PairModel,
    depth: int,
    collect_details: bool = False,
) -> LctSigmaEstimate:
    """Estimate min A/sigma over tracked curves and enumerated chains.

    The result is an estimate over the enumerated family, not a decision:
    deeper or differently-positioned divisors are not inspected.  The
    certified lower bound is 1 + epsilon_gap(pair).
    """
    surface = pair.surface
    anti = pair.anti_log_canonical_class()
    decomposition = pair.decomposition()
    best: Fraction | None = None
    binding: str | None = None
    details: list[ChainRatio] = []

    def consider(description: str, log_disc: Fraction, order: Fraction) -> None:
        nonlocal best, binding
        if collect_details:
            details.append(ChainRatio(description, log_disc, order))
        if order > 0:
            ratio = log_disc / order
            if best is None or ratio < best:
                best = ratio
                binding = description

    for name, coeff in decomposition.negative_coeffs.items():
        consider(name, _ONE - pair.boundary_coefficient(name), coeff)
    for points, names in enumerate_chains(surface, depth):
        order = sigma(surface, anti, points, names=names)
        log_disc = chain_log_discrepancy(
            surface, points, boundary=pair.boundary, names=names
        )
        consider(_describe_chain(points), log_disc, order)

    eps = epsilon_gap(pair)
    bound = _ONE + eps if eps is not None else None
    if best is not None and bound is not None and best < bound:
        raise InvariantViolationError(
            f"estimate {best} undercuts the certified bound {bound}"
        )
    return LctSigmaEstimate(
        min_ratio=best,
        certified_lower_bound=bound,
        epsilon=eps,
        binding=binding,
        details=tuple(details),
    )


@dataclass(frozen=True)
class FactorizationStep:
    """Per-step verdict for the redundancy factorization of a trace."""

    index: int
    curve: str
    kind: str  # "redundant-blow-down" or "resolution-identical"
    verified: bool
    point_multiplicity: Fraction | None


@dataclass(frozen=True)
class FactorizationReport:
    ok: bool
    steps: tuple[FactorizationStep, ...]


def check_mmp_redundant_factorization(trace: MMPTrace) -> FactorizationReport:
    """Classify each contraction of a trace as the inverse of a redundant
    blow-up or as resolution-preserving.

    A step on a smooth model contracting a curve with C^2 = K.C = -1 is a
    smooth blow-down; it is verified by checking that the image point is a
    redundant point of the downstairs pair (multiplicity of N + boundary at
    the point, read off through intersection numbers with the contracted
    curve).  Any other step contracts a curve into a singular point, so the
    minimal resolution downstairs is unchanged and there is nothing to
    factor.
    """
    results: list[FactorizationStep] = []
    ok = True
    for step in trace.steps:
        surface = step.decomposition.model
        is_blow_down = (
            step.was_smooth
            and step.self_intersection == -1
            and step.canonical_degree == -1
        )
        if not is_blow_down:
            results.append(
                FactorizationStep(step.index, step.curve, "resolution-identical", True, None)
            )
            continue
        down = step.result
        down_negative = down.decomposition().negative_coeffs
        contracted_cls = surface.curve_class(step.curve)
        mult = _ZERO
        for curve in surface.curves:
            if curve.name == step.curve:
                continue
            crossing = surface.pair(contracted_cls, curve.cls)
            if crossing == 0:
                continue
            weight = down_negative.get(curve.name, _ZERO) + down.boundary_coefficient(
                curve.name
            )
            mult += crossing * weight
        verified = mult >= 1
        ok = ok and verified
        results.append(
            FactorizationStep(
                step.index, step.curve, "redundant-blow-down", verified, mult
            )
        )
    return FactorizationReport(ok=ok, steps=tuple(results))
