"""Small exact linear algebra over the rationals.

All routines take sequences of rows and return fresh lists of
:class:`fractions.Fraction`.  Matrices here are tiny (a handful of rows), so
plain Gaussian elimination is the right tool.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

Vector = tuple
Rows = Sequence[Sequence]


def frac_vector(v: Iterable) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in v)


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), 0)


def sub(u: Sequence, v: Sequence) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def add(u: Sequence, v: Sequence) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def scale(c, v: Sequence) -> tuple:
    return tuple(c * a for a in v)


def centroid(points: Sequence[Sequence]) -> tuple[Fraction, ...]:
    k = len(points)
    return tuple(Fraction(sum(col), k) for col in zip(*points))


def rref(rows: Rows, ncols: int | None = None) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [[Fraction(x) for x in r] for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        if piv != 1:
            m[r] = [x / piv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Rows) -> int:
    if not rows:
        return 0
    return len(rref(rows)[1])


def affine_rank(points: Sequence[Sequence]) -> int:
    """Dimension of the affine hull (-1 for the empty set)."""
    if not points:
        return -1
    p0 = points[0]
    return rank([sub(p, p0) for p in points[1:]]) if len(points) > 1 else 0


def nullspace(rows: Rows, ncols: int) -> list[tuple[Fraction, ...]]:
    """Basis of {x : A x = 0}."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(red, pivots):
            x[p] = -row[f]
        basis.append(tuple(x))
    return basis


def solve(rows: Rows, rhs: Sequence) -> tuple[Fraction, ...] | None:
    """One solution of A x = b, or None if inconsistent."""
    ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(red, pivots):
        x[p] = row[ncols]
    return tuple(x)


def solve_combination(vectors: Sequence[Sequence], target: Sequence) -> tuple[Fraction, ...] | None:
    """Coefficients c with sum c_i vectors[i] = target, or None."""
    if not vectors:
        return () if all(t == 0 for t in target) else None
    cols = list(zip(*vectors))
    return solve(cols, target)


def det(rows: Rows) -> Fraction:
    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            d = -d
        piv = m[c][c]
        d *= piv
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / piv
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return d


def int_det(rows: Rows) -> int:
    return int(det(rows))


def primitive(v: Sequence) -> tuple[int, ...]:
    """Scale a rational vector to the primitive integer vector on its ray."""
    fr = [Fraction(x) for x in v]
    den = lcm(*(x.denominator for x in fr)) if fr else 1
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def first_nonzero_positive(v: Sequence) -> tuple:
    for x in v:
        if x != 0:
            return tuple(v) if x > 0 else tuple(-y for y in v)
    return tuple(v)


def affine_coordinates(points: Sequence[Sequence]) -> tuple[tuple, list[tuple], list[tuple[Fraction, ...]]]:
    """Express points in coordinates of their affine hull.

    Returns (origin, direction basis, coordinates of each point).
    """
    p0 = tuple(Fraction(x) for x in points[0])
    diffs = [sub(p, p0) for p in points]
    red, pivots = rref(diffs) if diffs else ([], [])
    basis = [tuple(r) for r in red]
    coords = []
    for d in diffs:
        # with reduced rows, the coordinate on basis vector i is the pivot entry
        coords.append(tuple(Fraction(d[p]) for p in pivots))
    return p0, basis, coords
