"""Exact simplex method over the rationals with Bland's rule.

Problems are given in equality form ``A x = b, x >= 0``.  Phase one either
finds a basic feasible solution or returns a Farkas vector ``y`` with
``y^T A <= 0`` and ``y^T b > 0``.  Bland's rule rules out cycling, and all
arithmetic is exact, so there is no numerical failure mode.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    x: tuple[Fraction, ...] | None = None
    value: Fraction | None = None
    farkas: tuple[Fraction, ...] | None = None


class _Tableau:
    def __init__(self, A: list[list[Fraction]], b: list[Fraction], basis: list[int]):
        self.A = A
        self.b = b
        self.basis = basis

    def pivot(self, r: int, c: int):
        A, b = self.A, self.b
        p = A[r][c]
        A[r] = [x / p for x in A[r]]
        b[r] = b[r] / p
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
                b[i] -= f * b[r]
        self.basis[r] = c

    def run(self, cost: list[Fraction], allowed: int) -> str:
        """Minimize cost over the tableau; columns >= allowed never enter."""
        while True:
            cb = [cost[j] for j in self.basis]
            entering = None
            for j in range(allowed):
                if j in self.basis:
                    continue
                red = cost[j] - sum((cb[i] * self.A[i][j] for i in range(len(self.A))), Fraction(0))
                if red < 0:
                    entering = j
                    break
            if entering is None:
                return "optimal"
            best = None
            for i in range(len(self.A)):
                a = self.A[i][entering]
                if a > 0:
                    ratio = self.b[i] / a
                    if best is None or ratio < best[0] or (ratio == best[0] and self.basis[i] < self.basis[best[1]]):
                        best = (ratio, i)
            if best is None:
                return "unbounded"
            self.pivot(best[1], entering)


def _duals(tab: _Tableau, cost: list[Fraction]) -> list[Fraction]:
    # y^T = c_B^T B^{-1}; B^{-1} sits in the artificial columns of the tableau
    m = len(tab.A)
    n_art0 = len(tab.A[0]) - m
    cb = [cost[j] for j in tab.basis]
    return [sum((cb[i] * tab.A[i][n_art0 + k] for i in range(m)), Fraction(0)) for k in range(m)]


def solve_lp(A: Sequence[Sequence], b: Sequence, c: Sequence | None = None) -> LPResult:
    """Maximize ``c.x`` subject to ``A x = b, x >= 0`` (feasibility if c is None)."""
    m = len(A)
    n = len(A[0]) if m else 0
    rows = [[Fraction(x) for x in r] for r in A]
    rhs = [Fraction(x) for x in b]
    sign = []
    for i in range(m):
        if rhs[i] < 0:
            rows[i] = [-x for x in rows[i]]
            rhs[i] = -rhs[i]
            sign.append(-1)
        else:
            sign.append(1)
    tab_rows = [rows[i] + [Fraction(int(i == k)) for k in range(m)] for i in range(m)]
    tab = _Tableau(tab_rows, rhs[:], list(range(n, n + m)))
    cost1 = [Fraction(0)] * n + [Fraction(1)] * m
    tab.run(cost1, n + m)
    value1 = sum((tab.b[i] for i in range(m) if tab.basis[i] >= n), Fraction(0))
    if value1 > 0:
        # reduced costs give y with y^T A <= 0 and y^T b > 0 in the sign-flipped system
        y = _duals(tab, cost1)
        farkas = tuple(s * yi for s, yi in zip(sign, y))
        return LPResult("infeasible", farkas=farkas)
    # drive artificials out of the basis where possible
    for i in range(m):
        if tab.basis[i] >= n:
            j = next((j for j in range(n) if tab.A[i][j] != 0), None)
            if j is not None:
                tab.pivot(i, j)
    x = [Fraction(0)] * n
    if c is None:
        for i, j in enumerate(tab.basis):
            if j < n:
                x[j] = tab.b[i]
        return LPResult("optimal", x=tuple(x), value=Fraction(0))
    cost2 = [-Fraction(v) for v in c] + [Fraction(0)] * m
    # artificial columns stuck in the basis sit on redundant rows with b = 0
    status = tab.run(cost2, n)
    if status == "unbounded":
        return LPResult("unbounded")
    for i, j in enumerate(tab.basis):
        if j < n:
            x[j] = tab.b[i]
    value = sum((Fraction(ci) * xi for ci, xi in zip(c, x)), Fraction(0))
    return LPResult("optimal", x=tuple(x), value=value)


def verify_farkas(A: Sequence[Sequence], b: Sequence, y: Sequence) -> bool:
    """True iff ``y^T A <= 0`` and ``y^T b > 0`` (so ``A x = b, x >= 0`` is empty)."""
    n = len(A[0]) if A else 0
    for j in range(n):
        if sum((Fraction(y[i]) * A[i][j] for i in range(len(A))), Fraction(0)) > 0:
            return False
    return sum((Fraction(yi) * bi for yi, bi in zip(y, b)), Fraction(0)) > 0
