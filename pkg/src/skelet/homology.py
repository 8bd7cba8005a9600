"""Integral cellular homology.

Unit pivots are eliminated sparsely first; whatever survives is handed to the
dense Smith normal form.  The elimination only uses unimodular row and column
operations, so the invariant factors are unchanged.
"""
from __future__ import annotations

from dataclasses import dataclass

from .complex import ChainComplex, RationalCellComplex
from .lattice import FiniteAbelianGroup, IntegerMatrix, smith_normal_form


@dataclass(frozen=True)
class HomologyResult:
    betti: tuple[int, ...]
    torsion: tuple[FiniteAbelianGroup, ...]

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** k * b for k, b in enumerate(self.betti))

    @property
    def torsion_free(self) -> bool:
        return all(t.is_trivial() for t in self.torsion)

    def __str__(self) -> str:
        parts = []
        for k, (b, t) in enumerate(zip(self.betti, self.torsion)):
            s = f"Z^{b}" if b else "0"
            if not t.is_trivial():
                s = f"{s} + {t}" if b else str(t)
            parts.append(f"H{k}={s}")
        return ", ".join(parts)


def _invariant_factors(cols: list[dict[int, int]]) -> list[int]:
    """Nonzero invariant factors of a sparse integer matrix given by columns."""
    cols = [dict(c) for c in cols if c]
    rows: dict[int, set[int]] = {}
    for j, c in enumerate(cols):
        for i in c:
            rows.setdefault(i, set()).add(j)
    alive = set(range(len(cols)))
    units = 0
    changed = True
    while changed:
        changed = False
        for j in sorted(alive, key=lambda j: len(cols[j])):
            if j not in alive:
                continue
            col = cols[j]
            if not col:
                alive.discard(j)
                continue
            piv = None
            for i, v in col.items():
                if v in (1, -1) and (piv is None or len(rows[i]) < len(rows[piv])):
                    piv = i
            if piv is None:
                continue
            pv = col[piv]
            for k in list(rows[piv]):
                if k == j:
                    continue
                other = cols[k]
                f = other[piv] * pv  # pv is +-1, so other -= f * col clears the entry
                for i, v in col.items():
                    nv = other.get(i, 0) - f * v
                    if nv:
                        if i not in other:
                            rows[i].add(k)
                        other[i] = nv
                    else:
                        if i in other:
                            del other[i]
                            rows[i].discard(k)
                if not other:
                    alive.discard(k)
            for i in col:
                rows[i].discard(j)
            del rows[piv]
            cols[j] = {}
            alive.discard(j)
            units += 1
            changed = True
    rest = [cols[j] for j in sorted(alive) if cols[j]]
    if not rest:
        return [1] * units
    ridx = sorted({i for c in rest for i in c})
    pos = {i: p for p, i in enumerate(ridx)}
    dense = [[0] * len(rest) for _ in ridx]
    for j, c in enumerate(rest):
        for i, v in c.items():
            dense[pos[i]][j] = v
    d = smith_normal_form(IntegerMatrix.from_rows(dense, len(rest))).d
    return [1] * units + list(d)


def homology(C: RationalCellComplex | ChainComplex) -> HomologyResult:
    """Integral homology of a cell complex or chain complex."""
    cc = C.chain_complex() if isinstance(C, RationalCellComplex) else C
    cc.check()
    top = len(cc.sizes)
    factors = {k: _invariant_factors(cc.boundaries[k]) for k in range(1, top)}
    betti = []
    torsion = []
    for k in range(top):
        rk_out = len(factors.get(k, []))
        into = factors.get(k + 1, [])
        betti.append(cc.sizes[k] - rk_out - len(into))
        torsion.append(FiniteAbelianGroup(tuple(sorted(x for x in into if x > 1))))
    return HomologyResult(tuple(betti), tuple(torsion))
