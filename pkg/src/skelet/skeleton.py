"""The three cell models attached to a star triangulation.

* the hatted complex, a branched cover of the boundary part with one cell
  per pair (τ, d), d a component of ``G_τ``;
* the skeleton, cells ``σ° x c`` with ``c`` a cell of the fiber torus lying
  in ``G_σ``;
* the quotient skeleton for a cone ``K``, where over ``σ°`` only the
  restriction of a character to ``L_F`` is remembered, ``F`` the smallest
  face of ``K`` containing ``σ``.

Boundaries follow the product rule
``d(σ x c) = sum_i (-1)^i (σ_i x p_i(c)) + (-1)^dim σ (σ x dc)``
where ``p_i`` is the fiber map into the stratum of the facet ``σ_i``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Literal

from .complex import Cell, RationalCellComplex
from .errors import CensusMismatch, NonCellularIdentification
from .fibers import fiber_table
from .lattice import IntegerMatrix, lattice_quotient
from .maps import DEFAULT_ROUNDS, CellularMap, Chart, MapRequest, cellularize_system, image_cell
from .polytope import ConeFace, RationalCone, check_cone_assumptions, minimal_face
from .rational import solve_combination
from .torus import DEFAULT_RANK_CAP, TorusComplex, cell_in_subgroup, torus_arrangement
from .triangulation import Simplex, StarTriangulation

NONREGULAR_WARNING = "triangulation is not regular: homotopy-equivalence guarantee void"


def _warnings(T: StarTriangulation) -> list[str]:
    return [] if T.is_regular else [NONREGULAR_WARNING]


@dataclass
class HattedComplex:
    triangulation: StarTriangulation
    complex: RationalCellComplex
    census: dict[int, int]  # dimension -> number of cells
    warnings: list[str] = field(default_factory=list)


def build_hatted(T: StarTriangulation) -> HattedComplex:
    table = fiber_table(T)
    cells, bnd = [], {}
    census: dict[int, int] = {}
    for s in T.cells:
        G = table[s]
        k = len(s) - 1
        for d in range(G.components.order):
            key = (s, d)
            cells.append(Cell(key, k, tuple(tuple(Fraction(x) for x in p) for p in T.coords(s)), ("simplex",)))
            census[k] = census.get(k, 0) + 1
            col = {}
            for sign, t in T.faces_with_signs(s):
                im = table[t].component_of(G.coset_reps[d])
                col[(t, im)] = col.get((t, im), 0) + sign
            bnd[key] = col
    return HattedComplex(T, RationalCellComplex(cells, bnd), census, _warnings(T))


@dataclass
class SkeletonModel:
    """Skeleton complex with the fiber arrangement it was built on.

    ``census[σ]`` is the number of cells over ``σ°`` per fiber dimension.
    """

    triangulation: StarTriangulation
    complex: RationalCellComplex
    arrangement: TorusComplex
    census: dict[Simplex, tuple[int, ...]]
    warnings: list[str] = field(default_factory=list)


def _vertex_classes(T: StarTriangulation) -> set:
    return {(T.points[i], Fraction(0)) for i in T.boundary_vertices}


def _product_chart(T: StarTriangulation, s: Simplex, c: Cell) -> tuple:
    return tuple(tuple(Fraction(x) for x in p) + q for p in T.coords(s) for q in c.chart)


def _assemble(T: StarTriangulation, strata: dict[Simplex, tuple[TorusComplex, RationalCellComplex]],
              fiber_maps: dict[tuple[Simplex, Simplex], object]) -> tuple[RationalCellComplex, dict]:
    """Glue ``σ° x fiber(σ)`` over all σ; ``fiber_maps[(σ, τ)]`` maps fiber cells of σ to τ."""
    cells, bnd, geo = [], {}, {}
    census = {}
    for s in T.cells:
        A, sub = strata[s]
        k = len(s) - 1
        counts = [0] * (A.rank + 1)
        for c in sub.cells:
            key = (s, c.key)
            counts[c.dim] += 1
            cells.append(Cell(key, k + c.dim, _product_chart(T, s, c), ("simplex", "torus")))
            col: dict = {}
            faces = []
            for sign, t in T.faces_with_signs(s):
                f = fiber_maps.get((s, t))
                if f is None:
                    tk, deg = c.key, 1
                else:
                    tk, deg = f(c)
                faces.append((t, tk))
                if deg:
                    col[(t, tk)] = col.get((t, tk), 0) + sign * deg
            eps = (-1) ** k
            for fk, v in sub.boundary_of(c.key).items():
                col[(s, fk)] = col.get((s, fk), 0) + eps * v
            faces.extend((s, fk) for fk in sub.facets_of(c.key))
            bnd[key] = col
            geo[key] = faces
        census[s] = tuple(counts)
    return RationalCellComplex(cells, bnd, faces=geo), census


def _skeleton_on(T: StarTriangulation, A: TorusComplex) -> tuple[RationalCellComplex, dict]:
    strata = {}
    for s in T.cells:
        conds = T.coords(s)
        keys = [c.key for c in A.cells if cell_in_subgroup(c.chart, conds)]
        strata[s] = (A, A.subcomplex(keys))
    return _assemble(T, strata, {})


def skeleton_euler(T: StarTriangulation) -> int:
    table = fiber_table(T)
    return (-1) ** T.n * sum(table[s].components.order for s in T.simplices_of_dim(T.n))


def build_skeleton(T: StarTriangulation, rank_cap: int = DEFAULT_RANK_CAP,
                   arrangement: TorusComplex | None = None) -> SkeletonModel:
    """Skeleton complex of ``T``.

    The fiber torus is cut by ``<v, θ> in Z`` for every boundary vertex ``v``
    (restricted to the union of those hyperplanes, which carries every
    ``G_σ``).  A finer arrangement may be passed in.
    """
    if arrangement is None:
        cls = _vertex_classes(T)
        arrangement = torus_arrangement(T.rank, cls, support=cls, rank_cap=rank_cap)
    C, census = _skeleton_on(T, arrangement)
    want = skeleton_euler(T)
    if C.euler_characteristic() != want:
        raise CensusMismatch(f"skeleton has χ = {C.euler_characteristic()}, census gives {want}")
    return SkeletonModel(T, C, arrangement, census, _warnings(T))


@dataclass
class QuotientSkeletonModel:
    """Quotient skeleton for a cone ``K`` and the cellular map from the skeleton onto it."""

    triangulation: StarTriangulation
    cone: RationalCone
    complex: RationalCellComplex
    skeleton: SkeletonModel
    quotient_map: CellularMap
    faces: dict[Simplex, ConeFace]
    charts: dict[int, TorusComplex]
    census: dict[Simplex, tuple[int, ...]]
    rounds: int
    warnings: list[str] = field(default_factory=list)


def _coords_in(basis: IntegerMatrix, v) -> tuple[int, ...]:
    c = solve_combination([list(r) for r in basis.entries], [Fraction(x) for x in v])
    if c is None or any(x.denominator != 1 for x in c):
        raise NonCellularIdentification(f"{v} is not in the face lattice")
    return tuple(int(x) for x in c)


def quotient_euler(T: StarTriangulation, K: RationalCone) -> int:
    total = 0
    for s in T.cells:
        F = minimal_face(K, T.coords(s))
        rows = [_coords_in(F.span_lattice_basis, v) for v in T.coords(s)]
        q = lattice_quotient(F.dim, rows)
        if q.free_rank == 0:
            total += (-1) ** (len(s) - 1) * q.torsion.order
    return total


def build_quotient_skeleton(T: StarTriangulation, K: RationalCone, rank_cap: int = DEFAULT_RANK_CAP,
                            rounds: int = DEFAULT_ROUNDS) -> QuotientSkeletonModel:
    """Quotient skeleton of ``T`` relative to ``K``.

    Fiber charts are the tori ``Hom(L_F, S^1)`` in the Hermite basis of
    ``L_F``, one per face ``F`` that occurs as the smallest face of some
    simplex.  The skeleton torus and all face charts are refined together
    until the restriction maps ``S -> F`` and ``F -> F'`` are cellular on
    the relevant subgroups.
    """
    warns = check_cone_assumptions(T.polytope, K) + _warnings(T)
    faces = {s: minimal_face(K, T.coords(s)) for s in T.cells}
    used = {F.id: F for F in faces.values()}
    vcoords = {s: [_coords_in(faces[s].span_lattice_basis, v) for v in T.coords(s)] for s in T.cells}

    cls = _vertex_classes(T)
    charts: dict[Hashable, Chart] = {"S": Chart(T.rank, set(cls), frozenset(cls))}
    for fid, F in used.items():
        fc = set()
        for s in T.cells:
            if faces[s].id == fid:
                fc.update((c, Fraction(0)) for c in vcoords[s])
        charts[fid] = Chart(F.dim, fc, frozenset(fc))

    def member(conds_list):
        return lambda c: any(cell_in_subgroup(c.chart, conds) for conds in conds_list)

    relmat: dict[tuple[int, int], list[list[int]]] = {}
    requests = []
    for fid, F in used.items():
        conds = [T.coords(s) for s in T.cells if faces[s].id == fid]
        requests.append(MapRequest("S", fid, F.span_lattice_basis.tolist(), member(conds)))
    pairs: dict[tuple[int, int], list] = {}
    for s in T.cells:
        for _, t in T.faces_with_signs(s):
            a, b = faces[s].id, faces[t].id
            if a != b:
                pairs.setdefault((a, b), []).append(vcoords[s])
    for (a, b), conds in sorted(pairs.items()):
        R = [list(_coords_in(used[a].span_lattice_basis, row)) for row in used[b].span_lattice_basis.entries]
        relmat[(a, b)] = R
        requests.append(MapRequest(a, b, R, member(conds)))

    built, nrounds = cellularize_system(charts, requests, rounds=rounds, rank_cap=rank_cap)

    skel = build_skeleton(T, rank_cap=rank_cap, arrangement=built["S"])
    strata = {}
    for s in T.cells:
        A = built[faces[s].id]
        keys = [c.key for c in A.cells if cell_in_subgroup(c.chart, vcoords[s])]
        strata[s] = (A, A.subcomplex(keys))

    def fmap(s, t):
        R = relmat[(faces[s].id, faces[t].id)]
        tgt = built[faces[t].id]

        def f(c):
            got = image_cell(c.chart, R, tgt)
            if got is None:
                raise NonCellularIdentification(f"fiber cell {c.key} of {s} is not mapped onto a cell over {t}")
            return got
        return f

    fmaps = {}
    for s in T.cells:
        for _, t in T.faces_with_signs(s):
            if faces[s].id != faces[t].id:
                fmaps[(s, t)] = fmap(s, t)
    Q, census = _assemble(T, strata, fmaps)
    want = quotient_euler(T, K)
    if Q.euler_characteristic() != want:
        raise CensusMismatch(f"quotient skeleton has χ = {Q.euler_characteristic()}, census gives {want}")

    qm = _skeleton_to_quotient(skel, Q, faces, built)
    return QuotientSkeletonModel(T, K, Q, skel, qm, faces, {k: v for k, v in built.items() if k != "S"},
                                 census, nrounds, warns)


def _skeleton_to_quotient(skel: SkeletonModel, Q: RationalCellComplex, faces, built) -> CellularMap:
    S = skel.complex
    A = skel.arrangement
    assignment, degrees = [], []
    for cell in S.cells:
        s, ck = cell.key
        F = faces[s]
        got = image_cell(A.cells[A.index[ck]].chart, F.span_lattice_basis.tolist(), built[F.id])
        if got is None or (s, got[0]) not in Q.index:
            raise NonCellularIdentification(f"skeleton cell {cell.key} has no image cell")
        assignment.append(Q.index[(s, got[0])])
        degrees.append(got[1])
    m = CellularMap(S, Q, tuple(assignment), tuple(degrees), "restriction to face lattices")
    if not m.verify():
        raise NonCellularIdentification("quotient map is not a chain map")
    if set(assignment) != set(range(len(Q.cells))):
        raise NonCellularIdentification("quotient map is not surjective on cells")
    return m


def euler_census(T: StarTriangulation, which: Literal["hatted", "skeleton"]) -> int:
    """Euler characteristic from the component-group census alone."""
    table = fiber_table(T)
    if which == "hatted":
        return sum((-1) ** (len(s) - 1) * table[s].components.order for s in T.cells)
    if which == "skeleton":
        return skeleton_euler(T)
    raise ValueError(f"unknown model {which!r}")
