"""Small exact linear algebra over Q on lists of Fractions.

Matrices are lists of rows. Everything here is dense and meant for the
modest sizes that arise per component and per degree.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]


def zeros(rows: int, cols: int) -> Matrix:
    return [[Fraction(0)] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = Fraction(1)
    return m


def copy(m: Sequence[Sequence[Fraction]]) -> Matrix:
    return [list(r) for r in m]


def matmul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]],
           inner: int | None = None, cols: int | None = None) -> Matrix:
    """Product a @ b. `inner` and `cols` disambiguate empty shapes."""
    rows = len(a)
    k = len(a[0]) if rows else (inner if inner is not None else len(b))
    if cols is None:
        cols = len(b[0]) if b else 0
    out = zeros(rows, cols)
    for i in range(rows):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            x = ai[t]
            if x:
                bt = b[t]
                for j in range(cols):
                    y = bt[j]
                    if y:
                        oi[j] += x * y
    return out


def transpose(m: Sequence[Sequence[Fraction]], cols: int | None = None) -> Matrix:
    if not m:
        return [[] for _ in range(cols or 0)]
    return [list(col) for col in zip(*m)]


def rref(m: Sequence[Sequence[Fraction]], ncols: int | None = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    a = copy(m)
    rows = len(a)
    cols = len(a[0]) if rows else (ncols or 0)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                ri = a[i]
                rr = a[r]
                for j in range(c, cols):
                    if rr[j]:
                        ri[j] -= f * rr[j]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a[:r], pivots


def rank(m: Sequence[Sequence[Fraction]]) -> int:
    if not m or not m[0]:
        return 0
    return len(rref(m)[1])


def nullspace(m: Sequence[Sequence[Fraction]], ncols: int) -> Matrix:
    """Basis of {x : m x = 0}, returned as a list of vectors."""
    if not m:
        return identity(ncols)
    r, piv = rref(m, ncols)
    free = [j for j in range(ncols) if j not in set(piv)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(r, piv):
            v[p] = -row[f]
        basis.append(v)
    return basis


def row_space(vectors: Sequence[Sequence[Fraction]], ncols: int) -> Matrix:
    """Canonical (RREF) basis for the span of the given vectors."""
    if not vectors:
        return []
    return rref(vectors, ncols)[0]


def solve(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction], ncols: int) -> list[Fraction] | None:
    """One solution of a x = b, or None when inconsistent."""
    rows = len(a)
    if rows == 0:
        return [Fraction(0)] * ncols
    aug = [list(a[i]) + [b[i]] for i in range(rows)]
    r, piv = rref(aug, ncols + 1)
    if ncols in piv:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(r, piv):
        x[p] = row[ncols]
    return x


def inverse(m: Sequence[Sequence[Fraction]]) -> Matrix:
    n = len(m)
    aug = [list(m[i]) + identity(n)[i] for i in range(n)]
    r, piv = rref(aug, 2 * n)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in r]


def intersect(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]], dim: int) -> Matrix:
    """Basis of span(a) ∩ span(b) inside Q^dim."""
    if not a or not b:
        return []
    # x in span(a) ∩ span(b)  <=>  sum s_i a_i - sum t_j b_j = 0
    cols = len(a) + len(b)
    sys = [[a[i][k] for i in range(len(a))] + [-b[j][k] for j in range(len(b))] for k in range(dim)]
    out = []
    for v in nullspace(sys, cols):
        out.append([sum((v[i] * a[i][k] for i in range(len(a))), Fraction(0)) for k in range(dim)])
    return row_space(out, dim)


def in_span(v: Sequence[Fraction], basis: Sequence[Sequence[Fraction]]) -> bool:
    if not any(v):
        return True
    if not basis:
        return False
    return rank(list(basis) + [list(v)]) == rank(basis)
