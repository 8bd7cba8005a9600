"""Cell decompositions of tori ``R^r / Z^r`` cut out by periodic hyperplanes.

A hyperplane class ``(u, q)`` stands for all hyperplanes ``<u, x> = q + k``
with ``k`` an integer.  Cells are faces of the regions of the arrangement
restricted to the unit cube; a cell is identified with its canonical lift,
the lift inside ``[0,1]^r`` that is not constantly 1 in any coordinate.
Coordinate classes are always present, so every cell has such a lift.
"""
from __future__ import annotations

from fractions import Fraction
from math import ceil, floor, gcd
from typing import Iterable, Sequence

from .complex import Cell, RationalCellComplex
from .errors import MissingHyperplane, RankCapExceeded
from .rational import centroid, det, dot, rank, solve_combination, sub

DEFAULT_RANK_CAP = 4

HyperplaneClass = tuple[tuple[int, ...], Fraction]


def _frac01(x: Fraction) -> Fraction:
    return x - floor(x)


def normalize_class(u: Sequence[int], q=0) -> list[HyperplaneClass]:
    """Split ``<u, x> in q + Z`` into classes with primitive normals.

    The normal is made primitive with first nonzero entry positive; a
    non-primitive normal ``g u'`` gives the ``g`` classes ``(u', (q + k)/g)``.
    """
    u = [int(x) for x in u]
    q = Fraction(q)
    if not any(u):
        raise ValueError("zero normal")
    g = 0
    for x in u:
        g = gcd(g, x)
    first = next(x for x in u if x)
    if first < 0:
        g = -g
    base = tuple(x // g for x in u)
    out = []
    for k in range(abs(g)):
        out.append((base, _frac01((q + k) / g)))
    return sorted(set(out))


def coordinate_classes(r: int) -> set[HyperplaneClass]:
    return {(tuple(int(i == j) for j in range(r)), Fraction(0)) for i in range(r)}


def canonical_lift(points: Iterable[Sequence[Fraction]]) -> tuple[tuple[Fraction, ...], ...]:
    """Translate a lift inside the unit cube to the canonical one and sort it."""
    pts = [tuple(Fraction(x) for x in p) for p in points]
    r = len(pts[0])
    shift = []
    for i in range(r):
        lo = min(p[i] for p in pts)
        t = -floor(lo)
        if all(p[i] + t == 1 for p in pts):
            t -= 1
        shift.append(t)
    return tuple(sorted(set(tuple(p[i] + shift[i] for i in range(r)) for p in pts)))


def frame(vertices: Sequence[Sequence[Fraction]]) -> list[tuple[Fraction, ...]]:
    """Oriented basis of the direction space, read off the sorted vertices."""
    vs = sorted(vertices)
    v0 = vs[0]
    out: list[tuple] = []
    for v in vs[1:]:
        d = sub(v, v0)
        if rank(out + [d]) > len(out):
            out.append(d)
    return out


def incidence_sign(cell: Sequence[Sequence[Fraction]], facet: Sequence[Sequence[Fraction]]) -> int:
    """Sign of ``facet`` in the boundary of ``cell`` (both in the same lift).

    Outward normal first, then the facet frame, compared with the cell frame.
    """
    fc = frame(cell)
    out = sub(centroid(facet), centroid(cell))
    coords = [solve_combination(fc, out)]
    for v in frame(facet):
        coords.append(solve_combination(fc, v))
    d = det(coords)
    if d == 0:
        raise ValueError("degenerate incidence")
    return 1 if d > 0 else -1


class _Arrangement:
    """Splitting engine shared by all regions of one piece."""

    def __init__(self, r: int):
        self.r = r
        self.normals: list[tuple] = []
        self.rhs: list[Fraction] = []
        self._rank_cache: dict[frozenset, int] = {}

    def add(self, a: Sequence, b) -> int:
        self.normals.append(tuple(a))
        self.rhs.append(Fraction(b))
        return len(self.normals) - 1

    def rank_of(self, ids: frozenset) -> int:
        v = self._rank_cache.get(ids)
        if v is None:
            v = rank([self.normals[i] for i in ids]) if ids else 0
            self._rank_cache[ids] = v
        return v


class _Region:
    __slots__ = ("active", "verts", "tight")

    def __init__(self, active, verts, tight):
        self.active = active
        self.verts = verts
        self.tight = tight


def _split(arr: _Arrangement, reg: _Region, u: tuple, c: Fraction) -> list[_Region]:
    vals = [dot(u, v) - c for v in reg.verts]
    if all(x >= 0 for x in vals) or all(x <= 0 for x in vals):
        return [reg]
    le = arr.add(u, c)
    ge = arr.add(tuple(-x for x in u), -c)
    r = arr.r
    new_pts = []
    neg = [i for i, x in enumerate(vals) if x < 0]
    pos = [i for i, x in enumerate(vals) if x > 0]
    for i in neg:
        for j in pos:
            common = reg.tight[i] & reg.tight[j]
            if arr.rank_of(common) != r - 1:
                continue
            t = vals[i] / (vals[i] - vals[j])
            vi, vj = reg.verts[i], reg.verts[j]
            p = tuple(a + t * (b - a) for a, b in zip(vi, vj))
            new_pts.append((p, common | {le, ge}))
    out = []
    for keep, cid in ((lambda x: x <= 0, le), (lambda x: x >= 0, ge)):
        verts, tight = [], []
        for v, tset, x in zip(reg.verts, reg.tight, vals):
            if keep(x):
                verts.append(v)
                tight.append(tset | {le, ge} if x == 0 else tset)
        for p, tset in new_pts:
            verts.append(p)
            tight.append(tset)
        out.append(_Region(reg.active | {cid}, verts, tight))
    return out


def _region_faces(arr: _Arrangement, reg: _Region) -> tuple[list[frozenset], dict[frozenset, int]]:
    """All faces of a region as vertex index sets, with their dimensions."""
    r = arr.r
    allv = frozenset(range(len(reg.verts)))

    def dim_of(vs: frozenset) -> int:
        common = frozenset.intersection(*(reg.tight[i] for i in vs))
        return r - arr.rank_of(common)

    d = dim_of(allv)
    dims = {allv: d}
    facets = []
    for cid in reg.active:
        vs = frozenset(i for i in allv if cid in reg.tight[i])
        if vs and vs != allv and vs not in dims:
            k = dim_of(vs)
            dims[vs] = k
            if k == d - 1:
                facets.append(vs)
    facets = [f for f in facets if dims[f] == d - 1]
    faces = set(facets)
    frontier = set(facets)
    while frontier:
        new = set()
        for a in frontier:
            for b in facets:
                x = a & b
                if x and x not in faces:
                    new.add(x)
        for x in new:
            dims[x] = dim_of(x)
        faces |= new
        frontier = new
    faces.add(allv)
    return sorted(faces, key=lambda s: (dims[s], sorted(s))), dims


def _cube_region(arr: _Arrangement) -> _Region:
    r = arr.r
    ids = []
    for i in range(r):
        e = tuple(int(i == j) for j in range(r))
        ids.append((arr.add(tuple(-x for x in e), 0), arr.add(e, 1)))
    verts, tight = [], []
    for bits in range(2 ** r):
        v = tuple(Fraction((bits >> i) & 1) for i in range(r))
        t = frozenset(ids[i][1] if v[i] == 1 else ids[i][0] for i in range(r))
        verts.append(v)
        tight.append(t)
    return _Region(frozenset(x for p in ids for x in p), verts, tight)


def _slice_region(arr: _Arrangement, u: tuple, c: Fraction) -> _Region | None:
    """The piece ``cube ∩ {<u,x> = c}`` as a region."""
    cube = _cube_region(arr)
    vals = [dot(u, v) - c for v in cube.verts]
    if all(x > 0 for x in vals) or all(x < 0 for x in vals):
        return None
    le = arr.add(u, c)
    ge = arr.add(tuple(-x for x in u), -c)
    r = arr.r
    verts, tight = [], []
    for v, t, x in zip(cube.verts, cube.tight, vals):
        if x == 0:
            verts.append(v)
            tight.append(t | {le, ge})
    for i in range(len(cube.verts)):
        for j in range(len(cube.verts)):
            if vals[i] < 0 < vals[j]:
                common = cube.tight[i] & cube.tight[j]
                if arr.rank_of(common) != r - 1:
                    continue
                t = vals[i] / (vals[i] - vals[j])
                p = tuple(a + t * (b - a) for a, b in zip(cube.verts[i], cube.verts[j]))
                verts.append(p)
                tight.append(common | {le, ge})
    return _Region(cube.active | {le, ge}, verts, tight)


def planes_in_cube(cls: HyperplaneClass) -> list[tuple[tuple[int, ...], Fraction]]:
    u, q = cls
    lo = sum(min(0, x) for x in u)
    hi = sum(max(0, x) for x in u)
    return [(u, q + k) for k in range(ceil(lo - q), floor(hi - q) + 1)]


class TorusComplex(RationalCellComplex):
    """Arrangement complex of a torus, with its defining classes recorded."""

    def __init__(self, rank: int, classes: frozenset, support: frozenset | None, cells, boundary, faces=None):
        self.rank = rank
        self.classes = classes
        self.support = support
        super().__init__(cells, boundary, faces=faces)


def torus_arrangement(
    rank: int,
    classes: Iterable[tuple[Sequence[int], object]] = (),
    support: Iterable[tuple[Sequence[int], object]] | None = None,
    rank_cap: int = DEFAULT_RANK_CAP,
) -> TorusComplex:
    """Decompose the torus of the given rank by periodic hyperplane classes.

    Args:
        rank: torus dimension ``r``.
        classes: pairs ``(u, q)``; normals need not be primitive.
        support: optional classes whose union carries the complex; when
            given, only cells inside that union are produced.
        rank_cap: refuse ranks above this value.
    """
    if rank > rank_cap:
        raise RankCapExceeded(f"torus rank {rank} exceeds cap {rank_cap}")
    cls: set[HyperplaneClass] = set(coordinate_classes(rank))
    for u, q in classes:
        cls.update(normalize_class(u, q))
    sup = None
    if support is not None:
        sup = set()
        for u, q in support:
            sup.update(normalize_class(u, q))
        cls |= sup
    cls_f = frozenset(cls)
    if rank == 0:
        return TorusComplex(0, cls_f, frozenset(sup) if sup is not None else None, [Cell((), 0, ((),), ("torus",))], {})
    planes = sorted({p for c in cls for p in planes_in_cube(c)})
    cells: dict[tuple, Cell] = {}
    boundary: dict[tuple, dict] = {}
    facets: dict[tuple, list] = {}

    pieces: list[tuple[_Arrangement, _Region]] = []
    if sup is None:
        arr = _Arrangement(rank)
        pieces.append((arr, _cube_region(arr)))
    else:
        for c in sorted(sup):
            for u, val in planes_in_cube(c):
                arr = _Arrangement(rank)
                reg = _slice_region(arr, u, val)
                if reg is not None:
                    pieces.append((arr, reg))
    for arr, start in pieces:
        regions = [start]
        for u, val in planes:
            nxt = []
            for reg in regions:
                nxt.extend(_split(arr, reg, u, val))
            regions = nxt
        for reg in regions:
            faces, dims = _region_faces(arr, reg)
            keys = {}
            for f in faces:
                keys[f] = canonical_lift(reg.verts[i] for i in f)
            for f in faces:
                key = keys[f]
                if key in cells:
                    continue
                d = dims[f]
                cells[key] = Cell(key, d, key, ("torus",))
                col: dict = {}
                geo = []
                if d > 0:
                    fv = [reg.verts[i] for i in f]
                    for g in faces:
                        if dims[g] == d - 1 and g < f:
                            s = incidence_sign(fv, [reg.verts[i] for i in g])
                            col[keys[g]] = col.get(keys[g], 0) + s
                            geo.append(keys[g])
                boundary[key] = col
                facets[key] = geo
    return TorusComplex(rank, cls_f, frozenset(sup) if sup is not None else None, cells.values(), boundary, facets)


def cell_in_subgroup(chart: Sequence[Sequence[Fraction]], conditions: Sequence[Sequence[int]], theta0=None) -> bool:
    """True iff every vertex of the lift has ``<v, x - theta0>`` equal to one integer per ``v``."""
    for v in conditions:
        vals = {dot(v, p) - (dot(v, theta0) if theta0 is not None else 0) for p in chart}
        if len(vals) != 1 or next(iter(vals)).denominator != 1:
            return False
    return True


def subgroup_subcomplex(A: TorusComplex, conditions: Sequence[Sequence[int]], theta0=None) -> RationalCellComplex:
    """Subcomplex of cells inside ``{x : <v, x - theta0> in Z for v in conditions}``."""
    theta0 = [Fraction(t) for t in theta0] if theta0 is not None else None
    for v in conditions:
        q = dot(v, theta0) if theta0 is not None else 0
        for c in normalize_class(v, q):
            if c not in A.classes:
                raise MissingHyperplane(f"class {c} is not part of the arrangement")
    keys = [c.key for c in A.cells if cell_in_subgroup(c.chart, conditions, theta0)]
    return A.subcomplex(keys)
