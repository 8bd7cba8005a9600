"""Cellular maps between torus complexes induced by integer linear maps.

A map ``x -> P x`` between tori sends a cell onto a single cell once both
sides are refined enough.  :func:`cellularize_system` refines a family of
torus arrangements until every requested map is cellular; the refinement
adds pulled-back target classes to sources and the supporting hyperplanes
of image polytopes to targets.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .complex import Cell, RationalCellComplex
from .errors import CellularizationDidNotStabilize, NonCellularIdentification
from .lp import solve_lp
from .rational import affine_coordinates, affine_rank, det, dot, nullspace, primitive, rank, solve_combination, sub
from .torus import (
    DEFAULT_RANK_CAP,
    HyperplaneClass,
    TorusComplex,
    canonical_lift,
    frame,
    normalize_class,
    torus_arrangement,
)

DEFAULT_ROUNDS = 8
Matrix = Sequence[Sequence[int]]


def apply(P: Matrix, x: Sequence) -> tuple:
    return tuple(sum((Fraction(a) * b for a, b in zip(row, x)), Fraction(0)) for row in P)


def _extreme_points(pts: list[tuple]) -> list[tuple]:
    pts = sorted(set(pts))
    if len(pts) <= 2:
        return pts
    d = affine_rank(pts)
    if d == len(pts) - 1:
        return pts
    out = []
    for i, p in enumerate(pts):
        others = pts[:i] + pts[i + 1:]
        rows = [[q[k] for q in others] for k in range(len(p))] + [[1] * len(others)]
        if solve_lp(rows, list(p) + [1]).status == "infeasible":
            out.append(p)
    return out


@dataclass(frozen=True)
class ImageInfo:
    points: tuple  # extreme points of the image, canonical lift
    dim: int


def image_polytope(chart: Sequence[Sequence[Fraction]], P: Matrix) -> ImageInfo | None:
    """Image of a cell lift under ``P``, moved into the unit cube.

    Returns None if the image does not fit in a single closed cube.
    """
    pts = [apply(P, v) for v in chart]
    if not pts[0]:
        return ImageInfo(((),), 0)
    k = len(pts[0])
    shift = [-floor(min(p[i] for p in pts)) for i in range(k)]
    pts = [tuple(p[i] + shift[i] for i in range(k)) for p in pts]
    if any(x > 1 for p in pts for x in p):
        return None
    ext = _extreme_points(pts)
    return ImageInfo(canonical_lift(ext), affine_rank(ext))


def image_cell(chart, P: Matrix, target: RationalCellComplex) -> tuple[Hashable, int] | None:
    """Target cell key that the cell maps onto, and the degree (0 on collapse)."""
    img = image_polytope(chart, P)
    if img is None or img.points not in target.index:
        return None
    src_dim = affine_rank(list(chart))
    if img.dim < src_dim:
        return img.points, 0
    fs = frame(chart)
    ft = frame(img.points)
    if not fs:
        return img.points, 1
    coords = [solve_combination(ft, apply(P, v)) for v in fs]
    d = det(coords)
    return img.points, (1 if d > 0 else -1)


def supporting_classes(img: ImageInfo) -> set[HyperplaneClass]:
    """Hyperplane classes through the affine hull and the facets of an image polytope."""
    pts = list(img.points)
    k = len(pts[0])
    out: set[HyperplaneClass] = set()
    p0 = pts[0]
    diffs = [sub(p, p0) for p in pts[1:]]
    d = img.dim
    if d < k:
        for u in nullspace(diffs, k) if diffs else nullspace([], k):
            ui = primitive(u)
            out.update(normalize_class(ui, dot(ui, p0)))
    if d >= 1:
        origin, basis, coords = affine_coordinates(pts)
        from .polytope import hull_facets

        for a, off, tight in hull_facets(coords, d):
            face = [pts[i] for i in tight]
            fd = [sub(q, face[0]) for q in face[1:]]
            # Euclidean normal of the facet inside the affine hull
            cons = [[dot(b, w) for b in basis] for w in fd]
            ns = nullspace(cons, d) if cons else nullspace([], d)
            alpha = ns[0]
            n = primitive([sum((al * b[j] for al, b in zip(alpha, basis)), Fraction(0)) for j in range(k)])
            out.update(normalize_class(n, dot(n, face[0])))
    return out


def pullback_classes(classes: Iterable[HyperplaneClass], P: Matrix) -> set[HyperplaneClass]:
    out: set[HyperplaneClass] = set()
    cols = len(P[0]) if P else 0
    for u, q in classes:
        w = [sum(u[i] * P[i][j] for i in range(len(P))) for j in range(cols)]
        if any(w):
            out.update(normalize_class(w, q))
    return out


@dataclass
class CellularMap:
    """Cell assignment of a cellular map with the induced chain map.

    ``assignment[i]`` is the index of the target cell that source cell ``i``
    maps onto and ``degrees[i]`` is +1, -1, or 0 when the dimension drops.
    """

    source: RationalCellComplex
    target: RationalCellComplex
    assignment: tuple[int, ...]
    degrees: tuple[int, ...]
    description: object = None

    def chain_image(self, i: int) -> dict[int, int]:
        d = self.degrees[i]
        return {self.assignment[i]: d} if d else {}

    def verify(self) -> bool:
        """Exact check of ``boundary_T m = m boundary_S`` on every cell."""
        S, T = self.source, self.target
        for i, c in enumerate(S.cells):
            if T.cells[self.assignment[i]].dim > c.dim:
                return False
            lhs: dict[int, int] = {}
            for t, d in self.chain_image(i).items():
                for f, v in T.boundary[t].items():
                    lhs[f] = lhs.get(f, 0) + d * v
            rhs: dict[int, int] = {}
            for f, v in S.boundary[i].items():
                for t, d in self.chain_image(f).items():
                    rhs[t] = rhs.get(t, 0) + v * d
            if {k: v for k, v in lhs.items() if v} != {k: v for k, v in rhs.items() if v}:
                return False
        return True

    def chain_matrix(self, k: int) -> list[dict[int, int]]:
        return [self.chain_image(i) for i in self.source.cells_of_dim(k)]


def _map_cells(S: RationalCellComplex, T: RationalCellComplex, P: Matrix) -> CellularMap | None:
    assignment, degrees = [], []
    for c in S.cells:
        got = image_cell(c.chart, P, T)
        if got is None:
            return None
        key, deg = got
        assignment.append(T.index[key])
        degrees.append(deg)
    return CellularMap(S, T, tuple(assignment), tuple(degrees), P)


@dataclass
class Chart:
    """A torus to be decomposed: rank, hyperplane classes and optional support."""

    rank: int
    classes: set = field(default_factory=set)
    support: frozenset | None = None


@dataclass
class MapRequest:
    source: Hashable
    target: Hashable
    matrix: Matrix
    domain: Callable[[Cell], bool] | None = None


def cellularize_system(charts: Mapping[Hashable, Chart], requests: Sequence[MapRequest],
                       rounds: int = DEFAULT_ROUNDS, rank_cap: int = DEFAULT_RANK_CAP) -> tuple[dict[Hashable, TorusComplex], int]:
    """Refine all charts until every requested map is cellular on its domain.

    Returns the final complexes and the number of refinement rounds used.
    """
    charts = {k: Chart(c.rank, set(c.classes), c.support) for k, c in charts.items()}
    built: dict[tuple, TorusComplex] = {}

    def complex_of(name):
        c = charts[name]
        key = (c.rank, frozenset(c.classes), c.support)
        if key not in built:
            built[key] = torus_arrangement(c.rank, c.classes, c.support, rank_cap=rank_cap)
        return built[key]

    for rnd in range(rounds + 1):
        changed = False
        # (b) pull target classes back to sources until stable
        while True:
            grew = False
            for req in requests:
                tgt = complex_of(req.target)
                new = pullback_classes(tgt.classes, req.matrix) - charts[req.source].classes
                if new:
                    charts[req.source].classes |= new
                    grew = True
            if not grew:
                break
        # (a) push supporting classes of non-cellular images to targets
        for req in requests:
            src = complex_of(req.source)
            tgt = complex_of(req.target)
            for c in src.cells:
                if req.domain is not None and not req.domain(c):
                    continue
                img = image_polytope(c.chart, req.matrix)
                if img is None or img.points not in tgt.index:
                    if img is None:
                        continue
                    new = supporting_classes(img) - tgt.classes
                    if new:
                        charts[req.target].classes |= new
                        changed = True
        if not changed:
            return {k: complex_of(k) for k in charts}, rnd
    raise CellularizationDidNotStabilize(f"no fixpoint after {rounds} rounds")


def cellularize_map(S: TorusComplex, T: TorusComplex, P: Matrix,
                    domain: Callable[[Cell], bool] | None = None,
                    rounds: int = DEFAULT_ROUNDS) -> tuple[TorusComplex, TorusComplex, CellularMap]:
    """Refine ``S`` and ``T`` so that ``x -> P x`` is cellular.

    The returned map is defined on the domain subcomplex of the refined
    source (all of it when ``domain`` is None).
    """
    charts = {"source": Chart(S.rank, set(S.classes), S.support),
              "target": Chart(T.rank, set(T.classes), T.support)}
    out, _ = cellularize_system(charts, [MapRequest("source", "target", P, domain)], rounds)
    S2, T2 = out["source"], out["target"]
    if domain is None:
        src = S2
    else:
        src = S2.subcomplex(S2.closure(c.key for c in S2.cells if domain(c)))
    m = _map_cells(src, T2, P)
    if m is None:
        raise CellularizationDidNotStabilize("refined map is still not cellular")
    if not m.verify():
        raise NonCellularIdentification("induced chain map does not commute with boundaries")
    return S2, T2, m


def quotient_by_cellular_map(m: CellularMap) -> RationalCellComplex:
    """Image subcomplex of a surjective cellular map, after checking it is a quotient.

    Each target cell in the image must be hit with full dimension, and the
    source cells mapping onto it must form a connected set under the facet
    relation.
    """
    S, T = m.source, m.target
    if not m.verify():
        raise NonCellularIdentification("chain map does not commute with boundaries")
    hit: dict[int, list[int]] = {}
    for i, t in enumerate(m.assignment):
        hit.setdefault(t, []).append(i)
    for t, srcs in hit.items():
        if not any(S.cells[i].dim == T.cells[t].dim for i in srcs):
            raise NonCellularIdentification(f"target cell {T.cells[t].key!r} is only hit by collapsed cells")
        members = set(srcs)
        adj: dict[int, set[int]] = {i: set() for i in srcs}
        for i in srcs:
            for f in S.facets[i]:
                if f in members:
                    adj[i].add(f)
                    adj[f].add(i)
        seen = {srcs[0]}
        stack = [srcs[0]]
        while stack:
            x = stack.pop()
            for y in adj[x] - seen:
                seen.add(y)
                stack.append(y)
        if seen != members:
            raise NonCellularIdentification(f"fiber over {T.cells[t].key!r} is disconnected")
    keys = [T.cells[t].key for t in hit]
    if not T.is_closed(keys):
        raise NonCellularIdentification("image is not a subcomplex")
    return T.subcomplex(keys)

