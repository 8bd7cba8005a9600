"""Exact integer linear algebra.

Smith and Hermite normal forms, saturation of sublattices and quotients of
``Z^n`` by sublattices.  Matrices are small and dense; entries are Python
integers so there is no overflow to worry about.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence


@dataclass(frozen=True)
class IntegerMatrix:
    """Dense integer matrix stored row-major as a tuple of tuples."""

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("entries do not match the declared shape")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], cols: int | None = None) -> "IntegerMatrix":
        data = tuple(tuple(int(x) for x in r) for r in rows)
        if cols is None:
            if not data:
                raise ValueError("column count required for an empty matrix")
            cols = len(data[0])
        return cls(len(data), cols, data)

    @classmethod
    def identity(cls, n: int) -> "IntegerMatrix":
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    def transpose(self) -> "IntegerMatrix":
        return IntegerMatrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else tuple(() for _ in range(self.cols)))

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        cols = list(zip(*other.entries)) if other.rows else [()] * other.cols
        data = tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.entries)
        return IntegerMatrix(self.rows, other.cols, data)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return self.entries[ij[0]][ij[1]]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


def _as_matrix(A, cols: int | None = None) -> IntegerMatrix:
    if isinstance(A, IntegerMatrix):
        return A
    return IntegerMatrix.from_rows(A, cols)


@dataclass(frozen=True)
class FiniteAbelianGroup:
    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        for a, b in zip(self.invariant_factors, self.invariant_factors[1:]):
            if b % a:
                raise ValueError("invariant factors must form a divisibility chain")
        if any(d < 2 for d in self.invariant_factors):
            raise ValueError("invariant factors must be at least 2")

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def __str__(self) -> str:
        if not self.invariant_factors:
            return "0"
        return " + ".join(f"Z/{d}" for d in self.invariant_factors)


@dataclass(frozen=True)
class SNFDecomposition:
    """``left @ A @ right == diagonal`` with ``d`` the nonzero diagonal."""

    d: tuple[int, ...]
    left: IntegerMatrix
    right: IntegerMatrix
    diagonal: IntegerMatrix
    right_inverse: IntegerMatrix = field(repr=False, compare=False, default=None)

    @property
    def rank(self) -> int:
        return len(self.d)


def _snf_core(A: list[list[int]], m: int, n: int):
    D = [row[:] for row in A]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    Vi = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in D:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        if q:
            D[dst] = [a + q * b for a, b in zip(D[dst], D[src])]
            U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst += q * col_src
        if q:
            for r in D:
                r[dst] += q * r[src]
            for r in V:
                r[dst] += q * r[src]
            # inverse: row_src -= q * row_dst
            Vi[src] = [a - q * b for a, b in zip(Vi[src], Vi[dst])]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = D[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(t, i)
        if j != t:
            swap_cols(t, j)
        while True:
            p = D[t][t]
            clean = True
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // p))
                    if D[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // p))
                    if D[t][j]:
                        clean = False
            if not clean:
                best = None
                for i in range(t, m):
                    if D[i][t] and (best is None or abs(D[i][t]) < best[0]):
                        best = (abs(D[i][t]), i, "r")
                for j in range(t, n):
                    if D[t][j] and (best is None or abs(D[t][j]) < best[0]):
                        best = (abs(D[t][j]), j, "c")
                if best[2] == "r" and best[1] != t:
                    swap_rows(t, best[1])
                elif best[2] == "c" and best[1] != t:
                    swap_cols(t, best[1])
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return D, U, V, Vi


def smith_normal_form(A) -> SNFDecomposition:
    """Smith normal form with unimodular transforms.

    Args:
        A: an :class:`IntegerMatrix` or a non-empty sequence of integer rows.

    Returns:
        An :class:`SNFDecomposition` with ``left @ A @ right == diagonal``.
    """
    M = _as_matrix(A)
    m, n = M.rows, M.cols
    D, U, V, Vi = _snf_core([list(r) for r in M.entries], m, n)
    d = tuple(D[i][i] for i in range(min(m, n)) if D[i][i] != 0)
    return SNFDecomposition(
        d=d,
        left=IntegerMatrix.from_rows(U, m),
        right=IntegerMatrix.from_rows(V, n),
        diagonal=IntegerMatrix.from_rows(D, n),
        right_inverse=IntegerMatrix.from_rows(Vi, n),
    )


def invariant_factors(A) -> tuple[int, ...]:
    return smith_normal_form(A).d


def hermite_normal_form(A) -> IntegerMatrix:
    """Row-style HNF: echelon, positive pivots, entries above pivots reduced.

    Zero rows are dropped, so the result is a basis of the row lattice.
    """
    M = _as_matrix(A)
    rows = [list(r) for r in M.entries]
    n = M.cols
    out: list[list[int]] = []
    pivots: list[int] = []
    for c in range(n):
        live = [r for r in rows if r[c] != 0]
        if not live:
            continue
        rest = [r for r in rows if r[c] == 0]
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[c]))
            p = live[0]
            nxt = [p]
            for r in live[1:]:
                q = r[c] // p[c]
                r = [a - q * b for a, b in zip(r, p)]
                if r[c] != 0:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            live = nxt
        p = live[0]
        if p[c] < 0:
            p = [-x for x in p]
        out.append(p)
        pivots.append(c)
        rows = [r for r in rest if any(r)]
    # reduce entries above pivots into [0, pivot)
    for k in range(len(out)):
        c = pivots[k]
        for i in range(k):
            q = out[i][c] // out[k][c]
            if q:
                out[i] = [a - q * b for a, b in zip(out[i], out[k])]
    return IntegerMatrix.from_rows(out, n)


def saturate(ambient_rank: int, sub) -> IntegerMatrix:
    """HNF basis of ``(R . rows) ∩ Z^ambient_rank``."""
    M = _as_matrix(sub, ambient_rank)
    if M.rows == 0:
        return IntegerMatrix(0, ambient_rank, ())
    snf = smith_normal_form(M)
    r = snf.rank
    basis = snf.right_inverse.entries[:r]
    return hermite_normal_form(IntegerMatrix.from_rows(basis, ambient_rank)) if r else IntegerMatrix(0, ambient_rank, ())


def complete_basis(ambient_rank: int, basis) -> IntegerMatrix:
    """Extend a saturated basis to a unimodular ``ambient_rank`` square matrix.

    The first rows of the result are the given basis rows.
    """
    B = _as_matrix(basis, ambient_rank)
    if B.rows == 0:
        return IntegerMatrix.identity(ambient_rank)
    snf = smith_normal_form(B)
    if any(x != 1 for x in snf.d) or snf.rank != B.rows:
        raise ValueError("basis is not saturated or not independent")
    extra = snf.right_inverse.entries[B.rows:]
    return IntegerMatrix.from_rows(list(B.entries) + list(extra), ambient_rank)


def _inverse_unimodular(U: IntegerMatrix) -> list[list[Fraction]]:
    from .rational import rref

    n = U.rows
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(U.entries)]
    red, _ = rref(aug, 2 * n)
    return [row[n:] for row in red]


def _frac01(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


@dataclass(frozen=True)
class LatticeQuotient:
    """``Z^ambient_rank`` modulo the row lattice of ``sub_generators``.

    ``coset_reps`` are the characters of the finite part: rational vectors
    theta in [0,1)^n with integral pairing against every generator, one per
    element of the torsion group.  ``keys[i]`` gives the values of
    ``coset_reps[i]`` on ``saturation`` rows modulo 1; these identify
    components independently of the chosen representative.
    """

    ambient_rank: int
    sub_generators: IntegerMatrix
    torsion: FiniteAbelianGroup
    free_rank: int
    coset_reps: tuple[tuple[Fraction, ...], ...]
    saturation: IntegerMatrix
    keys: tuple[tuple[Fraction, ...], ...]

    def key_of(self, theta: Sequence) -> tuple[Fraction, ...]:
        return tuple(_frac01(sum((Fraction(a) * b for a, b in zip(row, theta)), Fraction(0))) for row in self.saturation.entries)

    def index_of(self, theta: Sequence) -> int:
        """Position of the component containing ``theta``."""
        for g in self.sub_generators.entries:
            if sum((Fraction(a) * b for a, b in zip(g, theta)), Fraction(0)).denominator != 1:
                raise ValueError("theta does not pair integrally with the generators")
        return self.keys.index(self.key_of(theta))


def lattice_quotient(ambient_rank: int, sub) -> LatticeQuotient:
    M = _as_matrix(sub, ambient_rank)
    if M.cols != ambient_rank:
        raise ValueError("generator length differs from ambient rank")
    L = saturate(ambient_rank, M)
    s = L.rows
    if s == 0:
        return LatticeQuotient(ambient_rank, M, FiniteAbelianGroup(), ambient_rank,
                               (tuple(Fraction(0) for _ in range(ambient_rank)),), L, ((),))
    B = complete_basis(ambient_rank, L)
    Binv = _inverse_unimodular(B)
    # coordinates of generators in the saturation basis
    Lrows = [list(r) for r in L.entries]
    coeffs = []
    from .rational import solve_combination

    for g in M.entries:
        c = solve_combination(Lrows, g)
        coeffs.append([int(x) for x in c])
    C = IntegerMatrix.from_rows(coeffs, s) if coeffs else IntegerMatrix(0, s, ())
    snf = smith_normal_form(C)
    d = list(snf.d)
    # characters psi on L with C psi integral: psi = V phi, phi_i in (1/d_i) Z
    V = snf.right.entries
    axes = [range(x) for x in d]
    reps = []
    for ks in product(*axes):
        phi = [Fraction(k, x) for k, x in zip(ks, d)] + [Fraction(0)] * (s - len(d))
        psi = [_frac01(sum((V[i][j] * phi[j] for j in range(s)), Fraction(0))) for i in range(s)]
        full = psi + [Fraction(0)] * (ambient_rank - s)
        theta = tuple(_frac01(sum((Binv[i][j] * full[j] for j in range(ambient_rank)), Fraction(0))) for i in range(ambient_rank))
        reps.append(theta)
    reps.sort()
    torsion = FiniteAbelianGroup(tuple(x for x in d if x > 1))
    q = LatticeQuotient(ambient_rank, M, torsion, ambient_rank - s, tuple(reps), L, ())
    keys = tuple(q.key_of(t) for t in reps)
    return LatticeQuotient(ambient_rank, M, torsion, ambient_rank - s, tuple(reps), L, keys)
