"""Surface models: tracked curves, blow-ups, contractions, chains.

A SurfaceModel is an intersection lattice together with a canonical class,
a list of tracked curves, optional nef axioms, and the blow-up history that
produced it.  Blow-ups do exact bookkeeping: the lattice grows by an
orthogonal (-1) class, strict transforms drop by the declared point
multiplicities, and the canonical class gains the exceptional.
Contractions invert the process for negative definite curve sets, with
discrepancies solved exactly and classes descending by orthogonal
projection.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping, Sequence, Union

from . import linalg
from .errors import (
    DimensionMismatchError,
    InconsistentIncidenceError,
    InvariantViolationError,
    NotNegativeDefiniteError,
    UnknownNameError,
)
from .lattice import (
    DivisorClass,
    IntersectionLattice,
    NegDefCertificate,
    Rational,
    definiteness_certificate,
    rational,
    solve_on_support,
)

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _dot(row: Sequence[Fraction], coords: Sequence[Fraction]) -> Fraction:
    return sum((g * c for g, c in zip(row, coords) if g != 0 and c != 0), _ZERO)


@dataclass(frozen=True)
class TrackedCurve:
    """A named prime curve with its class; exceptionals remember their blow-up."""

    name: str
    cls: DivisorClass
    is_exceptional_of: int | None = None


class PointSpec:
    """Combinatorial point: positive local multiplicities on named curves.

    An empty spec is a free point (on no tracked curve).  Position is never
    coordinatized; tangency is modeled by meeting again on exceptionals of
    later blow-ups.
    """

    __slots__ = ("incidences",)

    def __init__(self, incidences: Mapping[str, int] | Iterable[tuple[str, int]] = ()):
        items = incidences.items() if isinstance(incidences, Mapping) else incidences
        seen: dict[str, int] = {}
        for name, mult in items:
            if not isinstance(mult, int) or mult < 1:
                raise InconsistentIncidenceError(
                    f"multiplicity on {name!r} must be a positive integer, got {mult!r}"
                )
            if name in seen:
                raise InconsistentIncidenceError(f"curve {name!r} listed twice in point")
            seen[name] = mult
        object.__setattr__(self, "incidences", tuple(sorted(seen.items())))

    @staticmethod
    def ensure(value: "PointSpec" | Mapping[str, int]) -> "PointSpec":
        return value if isinstance(value, PointSpec) else PointSpec(value)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.incidences)

    def multiplicity(self, name: str) -> int:
        for n, m in self.incidences:
            if n == name:
                return m
        return 0

    def is_free(self) -> bool:
        return not self.incidences

    def __setattr__(self, *args):  # immutable
        raise AttributeError("PointSpec is immutable")

    def __eq__(self, other) -> bool:
        return isinstance(other, PointSpec) and self.incidences == other.incidences

    def __hash__(self) -> int:
        return hash(self.incidences)

    def __str__(self) -> str:
        if not self.incidences:
            return "(free)"
        return ",".join(f"{n}:{m}" for n, m in self.incidences)

    def __repr__(self) -> str:
        return f"PointSpec({dict(self.incidences)!r})"


@dataclass(frozen=True)
class BlowUpRecord:
    """One blow-up: the point, the exceptional's name, and its log
    discrepancy over the root model (boundary-free)."""

    point: PointSpec
    exceptional_name: str
    log_discrepancy_over_root: Fraction


ChainPoint = Union[PointSpec, Mapping[str, int]]


class SurfaceModel:
    """Immutable-by-convention surface snapshot.

    ``smooth`` is False for contraction quotients, where self-intersections
    are rational and integral adjunction no longer applies.
    """

    def __init__(
        self,
        lattice: IntersectionLattice,
        canonical: DivisorClass,
        curves: Sequence[TrackedCurve],
        nef_axioms: Sequence[DivisorClass] = (),
        history: Sequence[BlowUpRecord] = (),
        smooth: bool = True,
        check: bool = True,
    ):
        self.lattice = lattice
        self.canonical = canonical
        self.curves = tuple(curves)
        self.nef_axioms = tuple(nef_axioms)
        self.history = tuple(history)
        self.smooth = smooth
        if check:
            self.validate()

    # -- lookups -----------------------------------------------------------

    @cached_property
    def curve_index(self) -> dict[str, int]:
        return {curve.name: i for i, curve in enumerate(self.curves)}

    @cached_property
    def curve_pairings(self) -> tuple[tuple[Fraction, ...], ...]:
        classes = [curve.cls for curve in self.curves]
        n = len(classes)
        rows = [[_ZERO] * n for _ in range(n)]
        for i in range(n):
            gvec = self.lattice.pairing_vector(classes[i])
            for j in range(i, n):
                value = _dot(gvec, classes[j].coords)
                rows[i][j] = value
                rows[j][i] = value
        return tuple(tuple(row) for row in rows)

    @property
    def rank(self) -> int:
        return self.lattice.rank

    def curve(self, name: str) -> TrackedCurve:
        try:
            return self.curves[self.curve_index[name]]
        except KeyError:
            raise UnknownNameError(f"no tracked curve named {name!r}") from None

    def curve_class(self, name: str) -> DivisorClass:
        return self.curve(name).cls

    def pair(self, a: DivisorClass, b: DivisorClass) -> Fraction:
        return self.lattice.pair(a, b)

    def curve_pair(self, a: str, b: str) -> Fraction:
        for name in (a, b):
            if name not in self.curve_index:
                raise UnknownNameError(f"no tracked curve named {name!r}")
        return self.curve_pairings[self.curve_index[a]][self.curve_index[b]]

    def class_of_combination(self, coefficients: Mapping[str, Rational]) -> DivisorClass:
        total = DivisorClass.zero(self.rank)
        for name, coeff in coefficients.items():
            total = total + self.curve_class(name).scale(coeff)
        return total

    def exceptional_discrepancy_over_root(self, name: str) -> Fraction:
        """Coefficient of the curve in K - (pullback of root K); 0 for root curves."""
        curve = self.curve(name)
        if curve.is_exceptional_of is None:
            return _ZERO
        return self.history[curve.is_exceptional_of].log_discrepancy_over_root - 1

    # -- invariants --------------------------------------------------------

    def validate(self) -> None:
        rank = self.rank
        if self.canonical.rank != rank:
            raise DimensionMismatchError("canonical class rank mismatch")
        names = [c.name for c in self.curves]
        if len(set(names)) != len(names):
            raise InvariantViolationError("tracked curve names must be unique")
        for curve in self.curves:
            if curve.cls.rank != rank:
                raise DimensionMismatchError(f"curve {curve.name!r} rank mismatch")
            if curve.cls.is_zero():
                raise InvariantViolationError(f"curve {curve.name!r} has zero class")
        if self.smooth:
            k_row = self.lattice.pairing_vector(self.canonical)
            for i, curve in enumerate(self.curves):
                self._check_adjunction(
                    curve, self.curve_pairings[i][i], _dot(k_row, curve.cls.coords)
                )
        for i, a in enumerate(self.curves):
            for j in range(i + 1, len(self.curves)):
                if self.curve_pairings[i][j] < 0:
                    raise InvariantViolationError(
                        f"distinct curves {a.name!r} and {self.curves[j].name!r}"
                        f" intersect negatively ({self.curve_pairings[i][j]})"
                    )
        for k, axiom in enumerate(self.nef_axioms):
            if axiom.rank != rank:
                raise DimensionMismatchError(f"nef axiom {k} rank mismatch")
            axiom_row = self.lattice.pairing_vector(axiom)
            for curve in self.curves:
                value = _dot(axiom_row, curve.cls.coords)
                if value < 0:
                    raise InvariantViolationError(
                        f"nef axiom {k} pairs negatively ({value}) with {curve.name!r}"
                    )

    def _check_adjunction(
        self, curve: TrackedCurve, self_int: Fraction, k_degree: Fraction
    ) -> None:
        genus = (self_int + k_degree) / 2 + 1
        if genus.denominator != 1 or genus < 0:
            raise InvariantViolationError(
                f"curve {curve.name!r} violates adjunction integrality:"
                f" C^2={self_int}, K.C={k_degree} gives arithmetic genus {genus}"
            )

    def arithmetic_genus(self, name: str) -> Fraction:
        cls = self.curve_class(name)
        return (self.pair(cls, cls) + self.pair(self.canonical, cls)) / 2 + 1

    # -- definiteness and supports ------------------------------------------

    def negative_definite_curves(self, names: Sequence[str]) -> tuple[bool, NegDefCertificate]:
        indices = [self.curve_index[self.curve(n).name] for n in names]
        sub = [[self.curve_pairings[i][j] for j in indices] for i in indices]
        cert = definiteness_certificate(sub, indices)
        return cert.valid, cert

    def solve_on_curves(self, targets: Mapping[str, Rational]) -> dict[str, Fraction]:
        names = list(targets)
        classes = [self.curve_class(n) for n in names]
        values = solve_on_support(self.lattice, classes, [targets[n] for n in names])
        return dict(zip(names, values))

    # -- blow-up -------------------------------------------------------------

    def blow_up(self, point: ChainPoint, name: str) -> "SurfaceModel":
        """Blow up a declared point; returns the new model.

        The new exceptional is tracked under ``name`` with E^2 = -1, strict
        transforms drop by their multiplicities, K gains E, nef axioms pull
        back.  Incidences are validated against current intersection numbers
        so that no pair of distinct prime curves is forced negative.
        """
        point = PointSpec.ensure(point)
        if name in self.curve_index:
            raise InvariantViolationError(f"curve name {name!r} already tracked")
        for curve_name, _ in point.incidences:
            if curve_name not in self.curve_index:
                raise UnknownNameError(f"point lies on unknown curve {curve_name!r}")
        for (a, ma), (b, mb) in combinations(point.incidences, 2):
            capacity = self.curve_pair(a, b)
            if ma * mb > capacity:
                raise InconsistentIncidenceError(
                    f"point multiplicities {a}:{ma}, {b}:{mb} exceed remaining"
                    f" intersection {capacity}"
                )
        child_lattice = self.lattice.blown_up(name)
        rank = child_lattice.rank
        exceptional = DivisorClass.of([0] * (rank - 1) + [1])
        new_curves = []
        for curve in self.curves:
            mult = point.multiplicity(curve.name)
            cls = curve.cls.pad(rank)
            if mult:
                cls = cls - exceptional.scale(mult)
            new_curves.append(TrackedCurve(curve.name, cls, curve.is_exceptional_of))
        new_curves.append(TrackedCurve(name, exceptional, len(self.history)))
        discrepancy = _ONE + sum(
            (rational(m) * self.exceptional_discrepancy_over_root(n) for n, m in point.incidences),
            _ZERO,
        )
        record = BlowUpRecord(point, name, _ONE + discrepancy)
        child = SurfaceModel(
            child_lattice,
            self.canonical.pad(rank) + exceptional,
            new_curves,
            [axiom.pad(rank) for axiom in self.nef_axioms],
            self.history + (record,),
            smooth=self.smooth,
            check=False,
        )
        # prime the pairing cache from the parent table; pullbacks preserve
        # pairings and the exceptional is orthogonal with square -1, so
        # (C_i - m_i E).(C_j - m_j E) = C_i.C_j - m_i m_j exactly
        parent = self.curve_pairings
        count = len(self.curves)
        mults = [point.multiplicity(curve.name) for curve in self.curves]
        table = [[_ZERO] * (count + 1) for _ in range(count + 1)]
        for i in range(count):
            for j in range(i, count):
                value = parent[i][j] - mults[i] * mults[j]
                table[i][j] = value
                table[j][i] = value
            table[i][count] = table[count][i] = Fraction(mults[i])
        table[count][count] = Fraction(-1)
        child.__dict__["curve_pairings"] = tuple(tuple(row) for row in table)
        child.validate()
        return child

    # -- contraction ----------------------------------------------------------

    def contract(self, names: Sequence[str]) -> "ContractionResult":
        """Contract a negative definite set of tracked curves.

        Discrepancies a_i solve (K - sum a_i C_i) . C_j = 0.  The quotient
        lattice is the orthogonal complement with its induced rational
        pairing; surviving curves, K, and nef axioms descend by orthogonal
        projection.
        """
        names = [self.curve(n).name for n in names]
        if len(set(names)) != len(names):
            raise InvariantViolationError("contraction set lists a curve twice")
        if not names:
            raise InvariantViolationError("contraction set is empty")
        ok, cert = self.negative_definite_curves(names)
        if not ok:
            raise NotNegativeDefiniteError(
                f"curves {names} are not negative definite (minors {list(cert.minors)})"
            )
        contracted = [self.curve(n) for n in names]
        targets = {n: self.pair(self.canonical, self.curve_class(n)) for n in names}
        discrepancies = self.solve_on_curves(targets)

        rows = [linalg.mat_vec([list(r) for r in self.lattice.gram], list(c.cls.coords)) for c in contracted]
        basis = linalg.nullspace(rows)
        if len(basis) != self.rank - len(names):
            raise InvariantViolationError("contracted classes are linearly dependent")
        new_gram = [
            [
                linalg.dot(u, linalg.mat_vec([list(r) for r in self.lattice.gram], v))
                for v in basis
            ]
            for u in basis
        ]
        columns = [[basis[j][i] for j in range(len(basis))] for i in range(self.rank)]

        support_gram = [[self.curve_pair(a, b) for b in names] for a in names]

        def project(v: DivisorClass) -> DivisorClass:
            pairings = [self.pair(v, c.cls) for c in contracted]
            coeffs = linalg.solve(support_gram, pairings)
            result = v
            for coeff, curve in zip(coeffs, contracted):
                if coeff != 0:
                    result = result - curve.cls.scale(coeff)
            return result

        def descend(v: DivisorClass) -> DivisorClass:
            projected = project(v)
            solution = linalg.solve_consistent(columns, list(projected.coords))
            if solution is None:
                raise InvariantViolationError("projection left the quotient span")
            return DivisorClass(tuple(solution))

        quotient_lattice = IntersectionLattice(new_gram)
        survivors = [
            TrackedCurve(c.name, descend(c.cls), None) for c in self.curves if c.name not in set(names)
        ]
        quotient = SurfaceModel(
            quotient_lattice,
            descend(self.canonical),
            survivors,
            [descend(a) for a in self.nef_axioms],
            history=(),
            smooth=False,
        )
        return ContractionResult(
            model=quotient,
            discrepancies=discrepancies,
            is_klt=all(a > -1 for a in discrepancies.values()),
            is_terminal=all(a > 0 for a in discrepancies.values()),
            certificate=cert,
            parent=self,
            contracted=tuple(contracted),
            _section=tuple(DivisorClass(tuple(vec)) for vec in basis),
            _descend=descend,
        )


@dataclass
class ContractionResult:
    """Quotient model plus exact discrepancy data for a contraction."""

    model: SurfaceModel
    discrepancies: dict[str, Fraction]
    is_klt: bool
    is_terminal: bool
    certificate: NegDefCertificate
    parent: SurfaceModel
    contracted: tuple[TrackedCurve, ...]
    _section: tuple[DivisorClass, ...]
    _descend: object

    def push_forward(self, cls: DivisorClass) -> DivisorClass:
        """Image of a parent class in the quotient (orthogonal projection)."""
        return self._descend(cls)

    def pull_back(self, cls: DivisorClass) -> DivisorClass:
        """Embed a quotient class back into the parent lattice."""
        if cls.rank != self.model.rank:
            raise DimensionMismatchError("quotient class rank mismatch")
        total = DivisorClass.zero(self.parent.rank)
        for coeff, vec in zip(cls.coords, self._section):
            if coeff != 0:
                total = total + vec.scale(coeff)
        return total


# -- module-level operations ------------------------------------------------


def blow_up(model: SurfaceModel, point: ChainPoint, name: str) -> SurfaceModel:
    return model.blow_up(point, name)


def contract(model: SurfaceModel, names: Sequence[str]) -> ContractionResult:
    return model.contract(names)


def pullback(child: SurfaceModel, cls: DivisorClass) -> DivisorClass:
    """Total-transform pullback of a class from an ancestor model.

    Valid because each blow-up appends one basis coordinate: the pullback of
    an ancestor class is the same coordinate vector padded with zeros.
    """
    return cls.pad(child.rank)


def chain_names(model: SurfaceModel, length: int, prefix: str = "X") -> list[str]:
    """Deterministic fresh names for the exceptionals of a chain."""
    names = []
    taken = set(model.curve_index)
    counter = 1
    while len(names) < length:
        candidate = f"{prefix}{counter}"
        counter += 1
        if candidate not in taken:
            names.append(candidate)
            taken.add(candidate)
    return names


def apply_chain(
    model: SurfaceModel,
    chain: Sequence[ChainPoint],
    names: Sequence[str] | None = None,
    prefix: str = "X",
) -> tuple[SurfaceModel, list[str]]:
    """Blow up a chain of (possibly infinitely-near) points.

    Each step's exceptional becomes a tracked curve that later steps may
    reference by name; names default to ``X1, X2, ...`` skipping collisions.
    """
    if names is None:
        names = chain_names(model, len(chain), prefix)
    if len(names) != len(chain):
        raise DimensionMismatchError("one exceptional name per chain point required")
    current = model
    for point, name in zip(chain, names):
        current = current.blow_up(point, name)
    return current, list(names)


def chain_log_discrepancy(
    model: SurfaceModel,
    chain: Sequence[ChainPoint],
    boundary: Mapping[str, Rational] | None = None,
    names: Sequence[str] | None = None,
) -> Fraction:
    """Log discrepancy of the final chain exceptional over (model, boundary).

    Crepant transport: the running boundary starts as the given coefficients,
    and each new exceptional enters it with coefficient (multiplicity of the
    running boundary at the point) - 1.  The result is 1 minus the final
    coefficient; a first blow-up at a point off the boundary gives 2.
    """
    if not chain:
        raise InvariantViolationError("chain must contain at least one point")
    if names is None:
        names = chain_names(model, len(chain))
    coefficients = {k: rational(v) for k, v in (boundary or {}).items()}
    for k in coefficients:
        model.curve(k)
    current = model
    last = _ZERO
    for point, name in zip(chain, names):
        point = PointSpec.ensure(point)
        mult = sum((rational(m) * coefficients.get(n, _ZERO) for n, m in point.incidences), _ZERO)
        current = current.blow_up(point, name)
        coefficients[name] = mult - 1
        last = mult - 1
    return 1 - last


def chain_order(
    model: SurfaceModel,
    coefficients: Mapping[str, Rational],
    chain: Sequence[ChainPoint],
    names: Sequence[str] | None = None,
) -> Fraction:
    """Multiplicity of the final chain exceptional in the pulled-back divisor.

    The divisor is given as coefficients on tracked curves; total-transform
    coefficients propagate as (multiplicity of the running divisor at each
    point).
    """
    if not chain:
        raise InvariantViolationError("chain must contain at least one point")
    if names is None:
        names = chain_names(model, len(chain))
    running = {k: rational(v) for k, v in coefficients.items()}
    for k in running:
        model.curve(k)
    current = model
    last = _ZERO
    for point, name in zip(chain, names):
        point = PointSpec.ensure(point)
        mult = sum((rational(m) * running.get(n, _ZERO) for n, m in point.incidences), _ZERO)
        current = current.blow_up(point, name)
        running[name] = mult
        last = mult
    return last


def pull_back_combination(
    model: SurfaceModel,
    coefficients: Mapping[str, Rational],
    point: ChainPoint,
    exceptional_name: str,
) -> dict[str, Fraction]:
    """Rewrite a curve combination after one blow-up at the given point.

    Strict transforms keep their coefficients; the exceptional receives the
    multiplicity of the combination at the point, so the result represents
    the total-transform pullback of the same class.
    """
    point = PointSpec.ensure(point)
    result = {name: rational(c) for name, c in coefficients.items()}
    for name in result:
        model.curve(name)
    mult = sum((rational(m) * result.get(n, _ZERO) for n, m in point.incidences), _ZERO)
    result[exceptional_name] = mult
    return result
