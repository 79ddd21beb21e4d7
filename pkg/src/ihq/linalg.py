"""Exact linear algebra over the rationals.

Matrices are plain lists of rows, entries are :class:`fractions.Fraction`.
Nothing here ever compares against a tolerance.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Vector = list[Fraction]
Matrix = list[list[Fraction]]


def to_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def rref(rows: Sequence[Sequence[Fraction]], ncols: int | None = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    m = [list(r) for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        for i in range(r, len(m)):
            if m[i][c] != 0:
                break
        else:
            continue
        m[r], m[i] = m[i], m[r]
        p = m[r][c]
        if p != 1:
            m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(rows: Sequence[Sequence[Fraction]], ncols: int | None = None) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(a: Sequence[Sequence[Fraction]], ncols: int) -> Matrix:
    """Basis (as rows) of ``{x : a x = 0}`` for a matrix with ``ncols`` columns."""
    red, pivots = rref(a, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def transpose(a: Sequence[Sequence[Fraction]], ncols: int | None = None) -> Matrix:
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*a)]


def left_nullspace(a: Sequence[Sequence[Fraction]], nrows: int, ncols: int) -> Matrix:
    """Basis of ``{y : y a = 0}``; ``a`` is ``nrows x ncols``."""
    if ncols == 0:
        return identity(nrows)
    return nullspace(transpose(a), nrows)


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def solve(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction], ncols: int) -> Vector | None:
    """One solution of ``a x = b`` or ``None`` when the system is inconsistent."""
    aug = [list(row) + [Fraction(bi)] for row, bi in zip(a, b)]
    red, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, pc in zip(red, pivots):
        x[pc] = row[ncols]
    return x


def matvec(a: Sequence[Sequence[Fraction]], x: Sequence[Fraction]) -> Vector:
    return [sum((aij * xj for aij, xj in zip(row, x)), Fraction(0)) for row in a]


def vecmat(y: Sequence[Fraction], a: Sequence[Sequence[Fraction]], ncols: int) -> Vector:
    out = [Fraction(0)] * ncols
    for yi, row in zip(y, a):
        if yi:
            for j, aij in enumerate(row):
                out[j] += yi * aij
    return out


def same_span(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]], ncols: int) -> bool:
    ra, rb = rank(a, ncols), rank(b, ncols)
    return ra == rb and rank(list(a) + list(b), ncols) == ra
