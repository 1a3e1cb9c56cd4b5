"""Intersection lattices: exact rational classes, pairings, definiteness.

A lattice is a fixed basis with a symmetric Gram matrix of exact rationals;
divisor classes are coordinate vectors in that basis.  Negative definiteness
is certified through leading principal minors (the k-th minor of a negative
definite matrix has sign (-1)^k), and supports are inverted exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import linalg
from .errors import DimensionMismatchError, InvariantViolationError, SingularSystemError

Rational = int | str | Fraction

_ZERO = Fraction(0)


def rational(value: Rational) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


@dataclass(frozen=True)
class DivisorClass:
    """Immutable coordinate vector in a lattice basis."""

    coords: tuple[Fraction, ...]

    @staticmethod
    def of(values: Iterable[Rational]) -> "DivisorClass":
        return DivisorClass(tuple(rational(v) for v in values))

    @staticmethod
    def zero(rank: int) -> "DivisorClass":
        return DivisorClass((_ZERO,) * rank)

    @property
    def rank(self) -> int:
        return len(self.coords)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        self._check(other)
        return DivisorClass(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        self._check(other)
        return DivisorClass(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(tuple(-a for a in self.coords))

    def scale(self, factor: Rational) -> "DivisorClass":
        q = rational(factor)
        return DivisorClass(tuple(q * a for a in self.coords))

    def __rmul__(self, factor: Rational) -> "DivisorClass":
        return self.scale(factor)

    def pad(self, rank: int) -> "DivisorClass":
        """Extend by zeros up to the given rank (pullback along blow-ups)."""
        if rank < self.rank:
            raise DimensionMismatchError(f"cannot pad rank {self.rank} down to {rank}")
        return DivisorClass(self.coords + (_ZERO,) * (rank - self.rank))

    def _check(self, other: "DivisorClass") -> None:
        if self.rank != other.rank:
            raise DimensionMismatchError(f"rank {self.rank} vs {other.rank}")

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


class IntersectionLattice:
    """Fixed-basis lattice with a symmetric exact Gram matrix."""

    def __init__(self, gram: Sequence[Sequence[Rational]], basis_names: Sequence[str] | None = None):
        rows = tuple(tuple(rational(v) for v in row) for row in gram)
        rank = len(rows)
        for row in rows:
            if len(row) != rank:
                raise InvariantViolationError("Gram matrix must be square")
        for i in range(rank):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise InvariantViolationError(f"Gram matrix not symmetric at ({i}, {j})")
        if basis_names is None:
            basis_names = tuple(f"e{i + 1}" for i in range(rank))
        else:
            basis_names = tuple(basis_names)
            if len(basis_names) != rank:
                raise InvariantViolationError("basis_names length must equal rank")
        self.gram = rows
        self.rank = rank
        self.basis_names = basis_names

    def pair(self, a: DivisorClass, b: DivisorClass) -> Fraction:
        if a.rank != self.rank or b.rank != self.rank:
            raise DimensionMismatchError(
                f"classes of rank {a.rank}/{b.rank} on a rank {self.rank} lattice"
            )
        total = _ZERO
        for i, ai in enumerate(a.coords):
            if ai == 0:
                continue
            row = self.gram[i]
            total += ai * sum((row[j] * bj for j, bj in enumerate(b.coords) if bj != 0), _ZERO)
        return total

    def pairing_vector(self, a: DivisorClass) -> tuple[Fraction, ...]:
        """G . a, so that pair(a, b) is the dot of this with b's coordinates.

        Worth precomputing when one class is paired against many others.
        """
        if a.rank != self.rank:
            raise DimensionMismatchError(
                f"class of rank {a.rank} on a rank {self.rank} lattice"
            )
        out = [_ZERO] * self.rank
        for i, ai in enumerate(a.coords):
            if ai == 0:
                continue
            for j, g in enumerate(self.gram[i]):
                if g != 0:
                    out[j] += ai * g
        return tuple(out)

    def blown_up(self, name: str) -> "IntersectionLattice":
        """Rank + 1 lattice: old basis pulled back, new (-1) class appended."""
        rank = self.rank
        gram = [list(row) + [_ZERO] for row in self.gram]
        gram.append([_ZERO] * rank + [Fraction(-1)])
        return IntersectionLattice(gram, self.basis_names + (name,))

    def __repr__(self) -> str:
        return f"IntersectionLattice(rank={self.rank})"


def intersect(lattice: IntersectionLattice, a: DivisorClass, b: DivisorClass) -> Fraction:
    """Intersection number a . b in the given lattice."""
    return lattice.pair(a, b)


def gram_matrix(lattice: IntersectionLattice, classes: Sequence[DivisorClass]) -> list[list[Fraction]]:
    """Pairwise intersection matrix of the given classes."""
    products = [[_ZERO] * len(classes) for _ in classes]
    for i, a in enumerate(classes):
        row = lattice.pairing_vector(a)
        for j in range(i, len(classes)):
            value = sum(
                (g * c for g, c in zip(row, classes[j].coords) if g != 0 and c != 0),
                _ZERO,
            )
            products[i][j] = value
            products[j][i] = value
    return products


@dataclass(frozen=True)
class NegDefCertificate:
    """Leading-principal-minor certificate for negative definiteness.

    Valid iff the k-th minor has sign (-1)^k for every k.  When elimination
    hits a zero pivot the minor list ends at that (zero) minor; the
    certificate is then invalid and later minors are irrelevant.
    """

    curve_indices: tuple[int, ...]
    minors: tuple[Fraction, ...]

    @property
    def minor_signs(self) -> tuple[int, ...]:
        return tuple(0 if m == 0 else (1 if m > 0 else -1) for m in self.minors)

    @property
    def valid(self) -> bool:
        if len(self.minors) != len(self.curve_indices):
            return False
        return all(
            sign == (1 if (k + 1) % 2 == 0 else -1)
            for k, sign in enumerate(self.minor_signs)
        )


def definiteness_certificate(
    matrix: Sequence[Sequence[Fraction]], indices: Sequence[int] | None = None
) -> NegDefCertificate:
    if indices is None:
        indices = range(len(matrix))
    return NegDefCertificate(tuple(indices), tuple(linalg.leading_minors(matrix)))


def is_negative_definite(
    lattice: IntersectionLattice,
    classes: Sequence[DivisorClass],
    indices: Sequence[int] | None = None,
) -> tuple[bool, NegDefCertificate]:
    """Check the span of the given classes; the empty set is vacuously true."""
    cert = definiteness_certificate(gram_matrix(lattice, classes), indices)
    return cert.valid, cert


def solve_on_support(
    lattice: IntersectionLattice,
    classes: Sequence[DivisorClass],
    targets: Sequence[Rational],
) -> list[Fraction]:
    """Coefficients x with (sum x_i C_i) . C_j = targets[j] for every j.

    Exact solve against the Gram matrix of the support classes; raises
    SingularSystemError when that matrix is singular.
    """
    if len(classes) != len(targets):
        raise DimensionMismatchError("one target per support class required")
    if not classes:
        return []
    try:
        return linalg.solve(gram_matrix(lattice, classes), [rational(t) for t in targets])
    except SingularSystemError:
        raise SingularSystemError(
            f"singular Gram submatrix on a support of {len(classes)} classes"
        ) from None
