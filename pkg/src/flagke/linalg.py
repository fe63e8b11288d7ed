"""Exact Gaussian elimination over the rationals."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]


class SingularSystemError(ArithmeticError):
    pass


class InconsistentSystemError(ArithmeticError):
    pass


def _as_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def row_echelon(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form (in place copy) and the pivot columns."""
    m = [row[:] for row in m]
    n_rows = len(m)
    n_cols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, n_rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for i in range(n_rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return m, pivots


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(row_echelon(_as_matrix(rows))[1])


def solve(a: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """Unique solution x of a x = b.

    ``a`` may be overdetermined as long as the system is consistent; raises
    SingularSystemError when the solution is not unique and
    InconsistentSystemError when none exists.
    """
    a = _as_matrix(a)
    n_cols = len(a[0]) if a else 0
    aug = [row + [Fraction(v)] for row, v in zip(a, b)]
    red, pivots = row_echelon(aug)
    if n_cols in pivots:
        raise InconsistentSystemError("system has no solution")
    if len(pivots) < n_cols:
        raise SingularSystemError(f"rank {len(pivots)} < {n_cols} unknowns")
    x = [Fraction(0)] * n_cols
    for row, c in zip(red, pivots):
        x[c] = row[-1]
    return x


def solve_many(a: Sequence[Sequence], rhs: Sequence[Sequence]) -> list[list[Fraction]]:
    """Solve a x_k = rhs_k for every right-hand side (columns given as rows)."""
    return [solve(a, b) for b in rhs]


def determinant(rows: Sequence[Sequence]) -> Fraction:
    m = _as_matrix(rows)
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            if f:
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det
