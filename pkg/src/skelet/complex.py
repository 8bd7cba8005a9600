"""Finite CW complexes with integer boundary data and rational cell charts."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import NotAComplex
from .lattice import IntegerMatrix

SparseColumn = dict[int, int]


@dataclass(frozen=True)
class Cell:
    """One cell: a hashable key, its dimension and the vertices of its chart."""

    key: Hashable
    dim: int
    chart: tuple[tuple[Fraction, ...], ...] = ()
    factors: tuple = ()


class ChainComplex:
    """Integer chain complex given by sparse boundary matrices.

    ``boundaries[k]`` maps each k-cell index to ``{(k-1)-cell index: coeff}``.
    """

    def __init__(self, sizes: Sequence[int], boundaries: Mapping[int, Sequence[SparseColumn]], check: bool = True):
        self.sizes = tuple(sizes)
        self.boundaries = {k: [dict(c) for c in cols] for k, cols in boundaries.items()}
        for k in range(len(self.sizes)):
            self.boundaries.setdefault(k, [{} for _ in range(self.sizes[k])])
        if check:
            self.check()

    @classmethod
    def from_matrices(cls, sizes: Sequence[int], matrices: Mapping[int, IntegerMatrix | Sequence[Sequence[int]]]) -> "ChainComplex":
        """Dense boundary matrices: ``matrices[k]`` has shape sizes[k-1] x sizes[k]."""
        bnd = {}
        for k, M in matrices.items():
            rows = M.entries if isinstance(M, IntegerMatrix) else M
            cols = []
            for j in range(sizes[k]):
                cols.append({i: rows[i][j] for i in range(sizes[k - 1]) if rows[i][j]})
            bnd[k] = cols
        return cls(sizes, bnd)

    @property
    def dimension(self) -> int:
        return len(self.sizes) - 1

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.sizes))

    def matrix(self, k: int) -> IntegerMatrix:
        rows = self.sizes[k - 1] if k > 0 else 0
        cols = self.sizes[k] if k < len(self.sizes) else 0
        data = [[0] * cols for _ in range(rows)]
        if 0 < k < len(self.sizes):
            for j, col in enumerate(self.boundaries[k]):
                for i, v in col.items():
                    data[i][j] = v
        return IntegerMatrix(rows, cols, tuple(tuple(r) for r in data))

    def check(self) -> None:
        for k in range(2, len(self.sizes)):
            low = self.boundaries[k - 1]
            for j, col in enumerate(self.boundaries[k]):
                acc: dict[int, int] = {}
                for i, v in col.items():
                    for h, w in low[i].items():
                        acc[h] = acc.get(h, 0) + v * w
                if any(acc.values()):
                    raise NotAComplex(f"boundary of boundary of cell {j} in degree {k} is nonzero")


class RationalCellComplex:
    """A finite CW complex whose cells carry rational polytope charts.

    Cells are sorted by ``(dim, key)``; ``boundary[i]`` is the boundary of
    cell ``i`` as ``{facet index: coefficient}``.
    """

    def __init__(self, cells: Iterable[Cell], boundary: Mapping[Hashable, Mapping[Hashable, int]],
                 check: bool = True, faces: Mapping[Hashable, Iterable[Hashable]] | None = None):
        cells = sorted(cells, key=lambda c: (c.dim, c.key))
        self.cells: tuple[Cell, ...] = tuple(cells)
        self.index = {c.key: i for i, c in enumerate(cells)}
        if len(self.index) != len(cells):
            raise NotAComplex("duplicate cell keys")
        bnd = []
        for c in cells:
            col = {}
            for fk, v in boundary.get(c.key, {}).items():
                if v == 0:
                    continue
                if fk not in self.index:
                    raise NotAComplex(f"facet {fk!r} of {c.key!r} is not a cell")
                fi = self.index[fk]
                if self.cells[fi].dim != c.dim - 1:
                    raise NotAComplex(f"facet {fk!r} of {c.key!r} has the wrong dimension")
                col[fi] = col.get(fi, 0) + v
            bnd.append({i: v for i, v in col.items() if v})
        self.boundary: tuple[dict[int, int], ...] = tuple(bnd)
        # geometric facets, including those whose incidence coefficient vanishes
        fc = []
        for i, c in enumerate(cells):
            extra = faces.get(c.key, ()) if faces is not None else ()
            fc.append(frozenset(bnd[i]) | frozenset(self.index[k] for k in extra))
        self.facets: tuple[frozenset[int], ...] = tuple(fc)
        self.dimension = max((c.dim for c in cells), default=-1)
        self._by_dim: list[list[int]] = [[] for _ in range(self.dimension + 1)]
        for i, c in enumerate(cells):
            self._by_dim[c.dim].append(i)
        if check:
            self.chain_complex()

    def __len__(self) -> int:
        return len(self.cells)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(cells per dimension {self.counts()})"

    def counts(self) -> tuple[int, ...]:
        return tuple(len(x) for x in self._by_dim)

    def cells_of_dim(self, k: int) -> list[int]:
        return self._by_dim[k] if 0 <= k <= self.dimension else []

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.counts()))

    def boundary_of(self, key: Hashable) -> dict[Hashable, int]:
        return {self.cells[i].key: v for i, v in self.boundary[self.index[key]].items()}

    def chain_complex(self) -> ChainComplex:
        pos = {}
        for k, idx in enumerate(self._by_dim):
            for p, i in enumerate(idx):
                pos[i] = p
        bnd = {}
        for k, idx in enumerate(self._by_dim):
            bnd[k] = [{pos[i]: v for i, v in self.boundary[j].items()} for j in idx]
        return ChainComplex(self.counts(), bnd)

    def closure(self, keys: Iterable[Hashable]) -> set[Hashable]:
        out = set()
        stack = list(keys)
        while stack:
            k = stack.pop()
            if k in out:
                continue
            out.add(k)
            stack.extend(self.cells[i].key for i in self.facets[self.index[k]])
        return out

    def is_closed(self, keys: Iterable[Hashable]) -> bool:
        ks = set(keys)
        return all(self.cells[i].key in ks for k in ks for i in self.facets[self.index[k]])

    def subcomplex(self, keys: Iterable[Hashable]) -> "RationalCellComplex":
        ks = set(keys)
        if not self.is_closed(ks):
            raise NotAComplex("cell set is not closed under taking faces")
        cells = [self.cells[self.index[k]] for k in ks]
        return RationalCellComplex(cells, {k: self.boundary_of(k) for k in ks}, faces=self.facets_of_keys(ks))

    def facets_of(self, key: Hashable) -> list[Hashable]:
        return [self.cells[i].key for i in self.facets[self.index[key]]]

    def facets_of_keys(self, keys: Iterable[Hashable]) -> dict[Hashable, list[Hashable]]:
        return {k: self.facets_of(k) for k in keys}


def simplex_faces(simplex: tuple) -> list[tuple[int, tuple]]:
    """Codimension-one faces with the signs (-1)^i."""
    if len(simplex) <= 1:
        return []
    return [((-1) ** i, simplex[:i] + simplex[i + 1:]) for i in range(len(simplex))]


def product_with_simplex(simplex: Sequence, F: RationalCellComplex,
                         vertex_coords: Mapping | None = None) -> RationalCellComplex:
    """Product of the closed simplex (with all its faces) and ``F``.

    Cell keys are ``(face, fiber key)``; the boundary follows the Leibniz
    rule with sign ``(-1)^dim(face)`` on the fiber term.
    """
    simplex = tuple(simplex)
    faces = []
    from itertools import combinations

    for k in range(1, len(simplex) + 1):
        faces.extend(combinations(simplex, k))
    cells = []
    bnd: dict = {}
    fcs: dict = {}
    for s in faces:
        base = [tuple(Fraction(x) for x in vertex_coords[v]) for v in s] if vertex_coords else []
        for c in F.cells:
            chart = tuple(b + p for b in base for p in c.chart) if base else c.chart
            key = (s, c.key)
            cells.append(Cell(key, len(s) - 1 + c.dim, chart, ("simplex",) + tuple(c.factors)))
            col = {}
            for sign, t in simplex_faces(s):
                col[(t, c.key)] = col.get((t, c.key), 0) + sign
            eps = (-1) ** (len(s) - 1)
            for fk, v in F.boundary_of(c.key).items():
                col[(s, fk)] = col.get((s, fk), 0) + eps * v
            bnd[key] = col
            fcs[key] = [(t, c.key) for _, t in simplex_faces(s)] + [(s, fk) for fk in F.facets_of(c.key)]
    return RationalCellComplex(cells, bnd, faces=fcs)
