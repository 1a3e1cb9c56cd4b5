"""Exact linear algebra over ``fractions.Fraction``.

Small dense routines backing the lattice kernels.  No floating point
anywhere: solutions substitute back with zero residual, determinants and
minors are exact rationals.  Sizes stay in the dozens, so Gaussian
elimination is the right tool; the hot square paths clear denominators and
eliminate fraction-free (Bareiss) to keep the inner loops on plain ints.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .errors import SingularSystemError

Vector = Sequence[Fraction]
Matrix = Sequence[Sequence[Fraction]]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def mat_vec(matrix: Matrix, vector: Vector) -> list[Fraction]:
    return [sum((row[j] * vector[j] for j in range(len(vector))), _ZERO) for row in matrix]


def dot(a: Vector, b: Vector) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), _ZERO)


def solve(matrix: Matrix, rhs: Vector) -> list[Fraction]:
    """Solve a square system exactly; raises SingularSystemError if singular.

    Each augmented row is scaled integral (solutions are unchanged), then
    eliminated fraction-free: every intermediate entry is a minor of the
    scaled system, so the divisions below are exact integer divisions.
    """
    n = len(matrix)
    if n == 0:
        return []
    aug: list[list[int]] = []
    for i, row in enumerate(matrix):
        entries = list(row)
        entries.append(rhs[i])
        scale = 1
        for x in entries:
            scale = scale * x.denominator // math.gcd(scale, x.denominator)
        if scale == 1:
            aug.append([x.numerator for x in entries])
        else:
            aug.append([x.numerator * (scale // x.denominator) for x in entries])
    previous = 1
    for col in range(n):
        pivot_row = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot_row is None:
            raise SingularSystemError(f"singular system (no pivot in column {col})")
        if pivot_row != col:
            aug[col], aug[pivot_row] = aug[pivot_row], aug[col]
        pivot_values = aug[col]
        pivot = pivot_values[col]
        for r in range(col + 1, n):
            row_values = aug[r]
            factor = row_values[col]
            for c in range(col + 1, n + 1):
                row_values[c] = (row_values[c] * pivot - factor * pivot_values[c]) // previous
            row_values[col] = 0
        previous = pivot
    solution = [_ZERO] * n
    for i in range(n - 1, -1, -1):
        total = Fraction(aug[i][n])
        row_values = aug[i]
        for j in range(i + 1, n):
            if row_values[j] and solution[j]:
                total -= row_values[j] * solution[j]
        solution[i] = total / row_values[i]
    return solution


def determinant(matrix: Matrix) -> Fraction:
    n = len(matrix)
    a = [list(row) for row in matrix]
    det = _ONE
    for col in range(n):
        pivot_row = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot_row is None:
            return _ZERO
        if pivot_row != col:
            a[col], a[pivot_row] = a[pivot_row], a[col]
            det = -det
        det *= a[col][col]
        inv = _ONE / a[col][col]
        for r in range(col + 1, n):
            if a[r][col] != 0:
                factor = a[r][col] * inv
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
    return det


def leading_minors(matrix: Matrix) -> list[Fraction]:
    """Leading principal minors d_1..d_n via fraction-free elimination.

    Entries are scaled integral by the common denominator L, which turns
    d_k into L**k times itself; eliminating without row exchange then makes
    each Bareiss pivot exactly a scaled minor, with all inner arithmetic on
    ints.  If a minor vanishes the remaining ones are not computed (the
    definiteness certificate is already broken at that index); the returned
    list then ends with 0.
    """
    n = len(matrix)
    scale = 1
    for row in matrix:
        for x in row:
            scale = scale * x.denominator // math.gcd(scale, x.denominator)
    if scale == 1:
        a = [[x.numerator for x in row] for row in matrix]
    else:
        a = [[x.numerator * (scale // x.denominator) for x in row] for row in matrix]
    minors: list[Fraction] = []
    previous = 1
    rescale = 1
    for k in range(n):
        pivot = a[k][k]
        rescale *= scale
        if pivot == 0:
            minors.append(_ZERO)
            return minors
        minors.append(Fraction(pivot, rescale))
        pivot_values = a[k]
        for r in range(k + 1, n):
            row_values = a[r]
            factor = row_values[k]
            for c in range(k + 1, n):
                row_values[c] = (row_values[c] * pivot - factor * pivot_values[c]) // previous
            row_values[k] = 0
        previous = pivot
    return minors


def rref(matrix: Matrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (rows, pivot column indices)."""
    rows = [list(r) for r in matrix]
    n_rows = len(rows)
    n_cols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    row = 0
    for col in range(n_cols):
        if row >= n_rows:
            break
        pivot_row = next((r for r in range(row, n_rows) if rows[r][col] != 0), None)
        if pivot_row is None:
            continue
        rows[row], rows[pivot_row] = rows[pivot_row], rows[row]
        pivot = rows[row][col]
        rows[row] = [x / pivot for x in rows[row]]
        for r in range(n_rows):
            if r != row and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[row])]
        pivots.append(col)
        row += 1
    return rows, pivots


def nullspace(matrix: Matrix) -> list[list[Fraction]]:
    """Basis of the right kernel, one vector per free column, in column order."""
    if not matrix:
        return []
    n_cols = len(matrix[0])
    rows, pivots = rref(matrix)
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for f in free:
        vec = [_ZERO] * n_cols
        vec[f] = _ONE
        for r, p in enumerate(pivots):
            vec[p] = -rows[r][f]
        basis.append(vec)
    return basis


def solve_consistent(matrix: Matrix, rhs: Vector) -> list[Fraction] | None:
    """One exact solution of a (possibly rectangular) system, or None.

    Free variables are set to zero, so the result is deterministic.
    """
    if not matrix:
        return None
    n_cols = len(matrix[0])
    aug = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    rows, pivots = rref(aug)
    if n_cols in pivots:
        return None
    solution = [_ZERO] * n_cols
    for r, p in enumerate(pivots):
        solution[p] = rows[r][n_cols]
    return solution
