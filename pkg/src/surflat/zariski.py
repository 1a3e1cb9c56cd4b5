"""Zariski decomposition, asymptotic orders, and redundant-point transport.

The decomposition D = P + N is computed relative to the model's tracked
curves: N is supported on a negative definite subset of them, P pairs
nonnegatively with every tracked curve ("model-nef") and is orthogonal to
Supp(N).  Outside the tracked configuration nothing is claimed; scenes are
expected to track every relevant negative curve.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence, Union

from . import linalg
from .birational import PointSpec, SurfaceModel, apply_chain, chain_names
from .errors import (
    DimensionMismatchError,
    InvariantViolationError,
    NoZariskiDecompositionError,
    NotRedundantError,
)
from .lattice import (
    DivisorClass,
    NegDefCertificate,
    Rational,
    definiteness_certificate,
    rational,
)

_ZERO = Fraction(0)

DivisorInput = Union[DivisorClass, Mapping[str, Rational]]


def _as_class(model: SurfaceModel, divisor: DivisorInput) -> DivisorClass:
    if isinstance(divisor, DivisorClass):
        if divisor.rank != model.rank:
            raise DimensionMismatchError(
                f"divisor rank {divisor.rank} does not match lattice rank {model.rank}"
            )
        return divisor
    return model.class_of_combination(divisor)


@dataclass(frozen=True)
class ZariskiDecomp:
    """Exact decomposition D = P + N over a model's tracked curves.

    negative_coeffs maps curve names to strictly positive coefficients
    (zero coefficients are dropped); certificate witnesses negative
    definiteness of Supp(N); nef_scope records what P was checked against.
    """

    positive: DivisorClass
    negative_coeffs: dict[str, Fraction]
    certificate: NegDefCertificate
    nef_scope: str
    model: SurfaceModel = field(repr=False)

    @property
    def negative_class(self) -> DivisorClass:
        return self.model.class_of_combination(self.negative_coeffs)

    @property
    def divisor(self) -> DivisorClass:
        return self.positive + self.negative_class

    @property
    def support(self) -> tuple[str, ...]:
        return tuple(self.negative_coeffs)

    def coefficient(self, name: str) -> Fraction:
        self.model.curve(name)
        return self.negative_coeffs.get(name, _ZERO)

    def is_nef_trivial(self) -> bool:
        return not self.negative_coeffs

    def check(self) -> None:
        """Re-verify every structural invariant; raises on failure."""
        model = self.model
        for name, coeff in self.negative_coeffs.items():
            if coeff < 0:
                raise NoZariskiDecompositionError(
                    f"negative part has negative coefficient {coeff} on {name!r}"
                )
        for curve in model.curves:
            value = model.pair(self.positive, curve.cls)
            if value < 0:
                raise NoZariskiDecompositionError(
                    f"positive part pairs negatively ({value}) with {curve.name!r}"
                )
            if curve.name in self.negative_coeffs and value != 0:
                raise NoZariskiDecompositionError(
                    f"positive part not orthogonal to support curve {curve.name!r}"
                )
        ok, _ = model.negative_definite_curves(list(self.negative_coeffs))
        if not ok:
            raise NoZariskiDecompositionError("support is not negative definite")
        if not self.certificate.valid:
            raise NoZariskiDecompositionError("stored certificate is invalid")


def _nef_scope(model: SurfaceModel) -> str:
    names = ", ".join(c.name for c in model.curves) or "(none)"
    scope = f"tracked curves: {names}"
    if model.nef_axioms:
        scope += f"; declared nef classes: {len(model.nef_axioms)}"
    return scope


def zariski_decompose(model: SurfaceModel, divisor: DivisorInput) -> ZariskiDecomp:
    """Decompose a divisor class against the model's tracked curves.

    Iterates: solve N on the current support so that (D - N) is orthogonal
    to it, then absorb every tracked curve the remainder still pairs
    negatively with.  The support only grows, so at most one round per
    curve.  Raises NoZariskiDecompositionError when the support stops being
    negative definite or the solved N picks up a negative coefficient;
    both signal a non-pseudoeffective input or an undertracked scene.
    """
    divisor = _as_class(model, divisor)
    divisor_row = model.lattice.pairing_vector(divisor)
    degrees = [
        sum((g * c for g, c in zip(divisor_row, curve.cls.coords) if g != 0 and c != 0), _ZERO)
        for curve in model.curves
    ]
    pairings = model.curve_pairings
    support: list[int] = []
    in_support: set[int] = set()
    coeffs: list[Fraction] = []
    while True:
        violators = []
        for i in range(len(model.curves)):
            if i in in_support:
                continue
            slack = degrees[i]
            for j, c in zip(support, coeffs):
                if c != 0 and pairings[i][j] != 0:
                    slack -= c * pairings[i][j]
            if slack < 0:
                violators.append(i)
        if not violators:
            break
        support.extend(violators)
        in_support.update(violators)
        sub = [[pairings[i][j] for j in support] for i in support]
        cert = definiteness_certificate(sub, support)
        if not cert.valid:
            raise NoZariskiDecompositionError(
                "no Zariski decomposition within tracked curves: support"
                f" {[model.curves[i].name for i in support]} is not negative definite"
            )
        coeffs = linalg.solve(sub, [degrees[i] for i in support])
    if any(c < 0 for c in coeffs):
        bad = [model.curves[i].name for i, c in zip(support, coeffs) if c < 0]
        raise NoZariskiDecompositionError(
            "no Zariski decomposition within tracked curves: solved negative"
            f" part has negative coefficients on {bad}"
        )
    negative_coeffs = {
        model.curves[i].name: c for i, c in sorted(zip(support, coeffs)) if c != 0
    }
    negative = model.class_of_combination(negative_coeffs)
    kept = sorted(i for i, c in zip(support, coeffs) if c != 0)
    sub = [[pairings[i][j] for j in kept] for i in kept]
    certificate = definiteness_certificate(sub, kept)
    return ZariskiDecomp(
        positive=divisor - negative,
        negative_coeffs=negative_coeffs,
        certificate=certificate,
        nef_scope=_nef_scope(model),
        model=model,
    )


Chain = Union[str, Sequence[Union[PointSpec, Mapping[str, int]]]]


def sigma(
    base: SurfaceModel,
    divisor: DivisorInput,
    chain: Chain,
    names: Sequence[str] | None = None,
) -> Fraction:
    """Asymptotic order of the divisor along the last exceptional of a chain.

    A chain of point specs is blown up over the base, the divisor pulls
    back totally, and the coefficient of the final exceptional in the
    negative part comes out.  Passing a curve name instead of a chain reads
    the coefficient of that tracked curve directly (depth zero).
    """
    cls = _as_class(base, divisor)
    if isinstance(chain, str):
        return zariski_decompose(base, cls).coefficient(chain)
    chain = list(chain)
    if not chain:
        raise InvariantViolationError("chain must name a tracked curve or contain points")
    child, used = apply_chain(base, chain, names=names)
    decomposition = zariski_decompose(child, cls.pad(child.rank))
    return decomposition.negative_coeffs.get(used[-1], _ZERO)


def transport_redundant(
    down: ZariskiDecomp,
    point: PointSpec | Mapping[str, int],
    boundary_mult: Rational,
    name: str | None = None,
) -> ZariskiDecomp:
    """Transport a decomposition through a redundant blow-up without re-solving.

    With m = mult_p N + mult_p boundary, the point is redundant when m >= 1;
    then upstairs P is the pullback of P and N gains the exceptional with
    coefficient m - 1.  Raises NotRedundantError when m < 1, in which case
    the would-be negative part is not effective.
    """
    point = PointSpec.ensure(point)
    model = down.model
    boundary_mult = rational(boundary_mult)
    if boundary_mult < 0:
        raise NotRedundantError("boundary multiplicity must be nonnegative")
    mult_n = sum(
        (rational(m) * down.negative_coeffs.get(n, _ZERO) for n, m in point.incidences),
        _ZERO,
    )
    total = mult_n + boundary_mult
    if total < 1:
        raise NotRedundantError(
            f"point is not redundant: mult_p(N) + mult_p(boundary) = {total} < 1,"
            " transported negative part would have a negative coefficient"
        )
    if name is None:
        name = chain_names(model, 1, prefix="E")[0]
    child = model.blow_up(point, name)
    coeffs = dict(down.negative_coeffs)
    exc_coeff = total - 1
    if exc_coeff != 0:
        coeffs[name] = exc_coeff
    kept = sorted(child.curve_index[n] for n in coeffs)
    sub = [[child.curve_pairings[i][j] for j in kept] for i in kept]
    certificate = definiteness_certificate(sub, kept)
    return ZariskiDecomp(
        positive=down.positive.pad(child.rank),
        negative_coeffs={child.curves[i].name: coeffs[child.curves[i].name] for i in kept},
        certificate=certificate,
        nef_scope=_nef_scope(child),
        model=child,
    )
