"""Fraction-free exact linear algebra over Q."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence


def _integer_rows(matrix: Sequence[Sequence]) -> list[list[int]]:
    rows = []
    for row in matrix:
        row = [Fraction(x) for x in row]
        den = 1
        for x in row:
            den = lcm(den, x.denominator)
        rows.append([x.numerator * (den // x.denominator) for x in row])
    return rows


def _check(matrix) -> int:
    if not matrix or not matrix[0]:
        raise ValueError("matrix must be non-empty")
    ncols = len(matrix[0])
    if any(len(r) != ncols for r in matrix):
        raise ValueError("matrix must be rectangular")
    return ncols


def bareiss_echelon(matrix: Sequence[Sequence]) -> tuple[list[list[int]], list[int]]:
    """Integer row-echelon form by Bareiss elimination; returns (rows, pivot columns).

    Rows are scaled copies of the input rows with cleared denominators, so the
    row space is unchanged.
    """
    ncols = _check(matrix)
    a = _integer_rows(matrix)
    nrows = len(a)
    pivots: list[int] = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        for i in range(r + 1, nrows):
            f = a[i][c]
            ai = a[i]
            ar = a[r]
            for j in range(c, ncols):
                # exact by Sylvester's identity
                ai[j] = (p * ai[j] - f * ar[j]) // prev
        for i in range(r + 1, nrows):
            for j in range(c):
                a[i][j] = 0
        prev = p
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(matrix: Sequence[Sequence]) -> int:
    return len(bareiss_echelon(matrix)[1])


def _primitive(vec: list[Fraction]) -> tuple[Fraction, ...]:
    den = 1
    for x in vec:
        den = lcm(den, x.denominator)
    ints = [x.numerator * (den // x.denominator) for x in vec]
    g = 0
    for v in ints:
        g = gcd(g, v)
    first = next(v for v in ints if v)
    if first < 0:
        g = -g
    return tuple(Fraction(v // g) for v in ints)


def nullspace(matrix: Sequence[Sequence]) -> list[tuple[Fraction, ...]]:
    """Exact basis of the right nullspace, empty iff full column rank.

    Basis vectors come from back-substitution with one free variable set to 1,
    then scaled to coprime integers with a positive first nonzero entry.
    """
    ncols = len(matrix[0]) if matrix and matrix[0] else 0
    rows, pivots = bareiss_echelon(matrix)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for r in range(len(pivots) - 1, -1, -1):
            c = pivots[r]
            row = rows[r]
            s = sum((row[j] * x[j] for j in range(c + 1, ncols) if row[j] and x[j]), Fraction(0))
            x[c] = -s / row[c]
        basis.append(_primitive(x))
    return basis


def solve(matrix: Sequence[Sequence], rhs: Sequence) -> list[Fraction] | None:
    """One exact solution of ``matrix @ x = rhs`` or ``None`` if inconsistent."""
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    ncols = len(matrix[0])
    rows, pivots = bareiss_echelon(aug)
    if pivots and pivots[-1] == ncols:
        return None
    x = [Fraction(0)] * ncols
    for r in range(len(pivots) - 1, -1, -1):
        c = pivots[r]
        row = rows[r]
        s = sum((row[j] * x[j] for j in range(c + 1, ncols) if row[j] and x[j]), Fraction(0))
        x[c] = (row[ncols] - s) / row[c]
    return x


def determinant(matrix: Sequence[Sequence]) -> Fraction:
    """Exact determinant via Bareiss on the denominator-cleared matrix."""
    n = _check(matrix)
    if len(matrix) != n:
        raise ValueError("determinant needs a square matrix")
    dens = []
    for row in matrix:
        den = 1
        for x in row:
            den = lcm(den, Fraction(x).denominator)
        dens.append(den)
    a = _integer_rows(matrix)
    sign = 1
    prev = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        p = a[c][c]
        for i in range(c + 1, n):
            f = a[i][c]
            for j in range(c + 1, n):
                a[i][j] = (p * a[i][j] - f * a[c][j]) // prev
            a[i][c] = 0
        prev = p
    scale = 1
    for d in dens:
        scale *= d
    return Fraction(sign * a[n - 1][n - 1], scale)
