"""Lattice polytopes and rational polyhedral cones.

Facets are found by brute force over affinely independent subsets, which is
exact and perfectly adequate in the ranks this package handles (at most 6).
Faces are closures of facet point sets under intersection.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations, product
from typing import Iterable, Sequence

from .errors import AssumptionViolation, DimensionCapExceeded, NotFullDimensional, PointOutsideCone
from .lattice import IntegerMatrix, complete_basis, lattice_quotient, saturate, smith_normal_form
from .rational import (
    affine_coordinates,
    affine_rank,
    centroid,
    dot,
    int_det,
    nullspace,
    primitive,
    rank,
    rref,
    solve_combination,
    sub,
)

DEFAULT_DIMENSION_CAP = 6


def hull_facets(points: Sequence[Sequence[Fraction]], dim: int) -> list[tuple[tuple, Fraction, frozenset[int]]]:
    """Facets of the convex hull of full-dimensional points in R^dim.

    Returns ``(inner normal, offset, tight point indices)`` triples with
    ``normal . p >= offset`` for every point.
    """
    n = len(points)
    if dim == 0:
        return []
    seen: dict[frozenset[int], tuple] = {}
    for combo in combinations(range(n), dim):
        base = points[combo[0]]
        diffs = [sub(points[i], base) for i in combo[1:]]
        if diffs and rank(diffs) < dim - 1:
            continue
        ns = nullspace(diffs, dim) if diffs else [tuple(Fraction(int(j == 0)) for j in range(dim))]
        if len(ns) != 1:
            continue
        a = ns[0]
        off = dot(a, base)
        vals = [dot(a, p) - off for p in points]
        if all(v >= 0 for v in vals):
            pass
        elif all(v <= 0 for v in vals):
            a = tuple(-x for x in a)
            off = -off
            vals = [-v for v in vals]
        else:
            continue
        tight = frozenset(i for i, v in enumerate(vals) if v == 0)
        if tight in seen:
            continue
        a_int = primitive(a)
        scale_ = Fraction(a_int[next(i for i, x in enumerate(a) if x != 0)]) / a[next(i for i, x in enumerate(a) if x != 0)]
        seen[tight] = (a_int, off * scale_, tight)
    return sorted(seen.values(), key=lambda t: sorted(t[2]))


def intersection_closure(sets: Iterable[frozenset], keep_empty: bool = False) -> set[frozenset]:
    base = set(sets)
    faces = set(base)
    frontier = set(base)
    while frontier:
        new = set()
        for a in frontier:
            for b in base:
                c = a & b
                if (c or keep_empty) and c not in faces:
                    new.add(c)
        faces |= new
        frontier = new
    return faces


@dataclass(frozen=True)
class PolytopeFace:
    vertices: tuple[int, ...]
    dim: int


class LatticePolytope:
    """Convex hull of integer points.

    The input may contain non-extreme points; ``vertices`` holds the sorted
    extreme points and ``discarded`` the rest.
    """

    def __init__(self, points: Iterable[Sequence[int]], dimension_cap: int = DEFAULT_DIMENSION_CAP):
        pts = sorted({tuple(int(x) for x in p) for p in points})
        if not pts:
            raise ValueError("a polytope needs at least one point")
        self.ambient_rank = len(pts[0])
        if any(len(p) != self.ambient_rank for p in pts):
            raise ValueError("points of differing length")
        if self.ambient_rank > dimension_cap:
            raise DimensionCapExceeded(f"ambient rank {self.ambient_rank} exceeds cap {dimension_cap}")
        self._input = pts
        origin, basis, coords = affine_coordinates(pts)
        self._origin, self._basis, self._pivots = origin, basis, rref(basis)[1] if basis else []
        self.dim = len(basis)
        raw = hull_facets(coords, self.dim)
        if self.dim == 0:
            extreme = {0}
        else:
            closure = intersection_closure(f[2] for f in raw)
            extreme = {next(iter(s)) for s in closure if len(s) == 1 or affine_rank([pts[i] for i in s]) == 0}
            if self.dim == 1:
                extreme = set().union(*(f[2] for f in raw))
        self.vertices: tuple[tuple[int, ...], ...] = tuple(sorted(pts[i] for i in extreme))
        self.discarded: tuple[tuple[int, ...], ...] = tuple(p for p in pts if p not in set(self.vertices))
        vindex = {v: i for i, v in enumerate(self.vertices)}
        self._coords_of = {p: c for p, c in zip(pts, coords)}
        # facets as (normal in hull coordinates, offset, vertex index set)
        self._facets = [
            (a, off, tuple(sorted(vindex[pts[i]] for i in tight if pts[i] in vindex)))
            for a, off, tight in raw
        ]

    def __repr__(self) -> str:
        return f"LatticePolytope({[list(v) for v in self.vertices]})"

    def __eq__(self, other) -> bool:
        return isinstance(other, LatticePolytope) and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash(self.vertices)

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient_rank

    def _hull_coords(self, x: Sequence) -> tuple[Fraction, ...] | None:
        d = sub([Fraction(t) for t in x], self._origin)
        c = tuple(Fraction(d[p]) for p in self._pivots)
        back = [sum((ci * b[j] for ci, b in zip(c, self._basis)), Fraction(0)) for j in range(self.ambient_rank)]
        return c if all(u == v for u, v in zip(back, d)) else None

    def contains(self, x: Sequence) -> bool:
        c = self._hull_coords(x)
        if c is None:
            return False
        if self.dim == 0:
            return True
        return all(dot(a, c) >= off for a, off, _ in self._facets)

    def facet_inequalities(self) -> list[tuple[tuple[int, ...], int]]:
        """Integer inner normals ``a`` and offsets ``b`` with ``a.x >= b`` on the polytope."""
        if not self.is_full_dimensional:
            raise NotFullDimensional("facet inequalities need a full-dimensional polytope")
        out = []
        for a, off, _ in self._facets:
            out.append((tuple(int(x) for x in a), int(off + dot(a, self._origin))))
        return out

    @property
    def facets(self) -> tuple[PolytopeFace, ...]:
        return tuple(PolytopeFace(f[2], self.dim - 1) for f in self._facets)

    @cached_property
    def faces(self) -> tuple[PolytopeFace, ...]:
        sets = intersection_closure(frozenset(f[2]) for f in self._facets)
        sets.add(frozenset(range(len(self.vertices))))
        out = []
        for s in sets:
            if not s:
                continue
            out.append(PolytopeFace(tuple(sorted(s)), affine_rank([self.vertices[i] for i in sorted(s)])))
        return tuple(sorted(out, key=lambda f: (f.dim, f.vertices)))

    def faces_containing_point(self, x: Sequence) -> list[PolytopeFace]:
        return [f for f in self.faces if _face_contains(self, f, x)]

    def lattice_points(self) -> list[tuple[int, ...]]:
        lo = [min(v[i] for v in self.vertices) for i in range(self.ambient_rank)]
        hi = [max(v[i] for v in self.vertices) for i in range(self.ambient_rank)]
        return [p for p in product(*(range(a, b + 1) for a, b in zip(lo, hi))) if self.contains(p)]

    def boundary_facets_avoiding_origin(self) -> list[PolytopeFace]:
        """Facets whose affine hull misses the origin (their union is the outer boundary)."""
        zero = (0,) * self.ambient_rank
        c0 = self._hull_coords(zero)
        out = []
        for (a, off, verts) in self._facets:
            if c0 is None or dot(a, c0) != off:
                out.append(PolytopeFace(verts, self.dim - 1))
        return out


def _face_contains(P: LatticePolytope, face: PolytopeFace, x: Sequence) -> bool:
    if not P.contains(x):
        return False
    c = P._hull_coords(x)
    for a, off, verts in P._facets:
        if set(face.vertices) <= set(verts) and dot(a, c) != off:
            return False
    return True


def face_lattice(obj, dimension_cap: int = DEFAULT_DIMENSION_CAP):
    """Faces of a polytope or cone, sorted by (dim, index set)."""
    if obj.ambient_rank > dimension_cap:
        raise DimensionCapExceeded(f"ambient rank {obj.ambient_rank} exceeds cap {dimension_cap}")
    return list(obj.faces)


def face_order(faces: Sequence) -> list[tuple[int, int]]:
    """Pairs (i, j) with faces[i] a proper face of faces[j]."""
    key = (lambda f: set(f.vertices)) if faces and isinstance(faces[0], PolytopeFace) else (lambda f: set(f.generators))
    sets = [key(f) for f in faces]
    return [(i, j) for i in range(len(faces)) for j in range(len(faces)) if i != j and sets[i] < sets[j]]


def _pulling_simplices(P: LatticePolytope, verts: tuple[int, ...], dim: int, memo: dict) -> list[tuple[int, ...]]:
    if verts in memo:
        return memo[verts]
    if dim == 0:
        memo[verts] = [verts]
        return memo[verts]
    apex = verts[0]
    vs = set(verts)
    subfaces = [f for f in P.faces if f.dim == dim - 1 and set(f.vertices) < vs and apex not in f.vertices]
    out = []
    for f in subfaces:
        for s in _pulling_simplices(P, f.vertices, dim - 1, memo):
            out.append((apex,) + s)
    memo[verts] = out
    return out


def pulling_triangulation(P: LatticePolytope) -> list[tuple[int, ...]]:
    """Simplices (as vertex index tuples) of the pulling triangulation."""
    return _pulling_simplices(P, tuple(range(len(P.vertices))), P.dim, {})


def normalized_volume(P: LatticePolytope) -> int:
    if not P.is_full_dimensional:
        raise NotFullDimensional("normalized volume needs a full-dimensional polytope")
    total = 0
    for s in pulling_triangulation(P):
        v0 = P.vertices[s[0]]
        total += abs(int_det([sub(P.vertices[i], v0) for i in s[1:]]))
    return total


@dataclass(frozen=True)
class ConeFace:
    id: int
    dim: int
    generators: tuple[int, ...]
    normals: tuple[tuple[int, ...], ...]
    span_lattice_basis: IntegerMatrix


class RationalCone:
    """Cone spanned by integer generators, with facets and lineality space."""

    def __init__(self, generators: Iterable[Sequence[int]], ambient_rank: int | None = None,
                 dimension_cap: int = DEFAULT_DIMENSION_CAP):
        gens = [tuple(int(x) for x in g) for g in generators]
        if ambient_rank is None:
            if not gens:
                raise ValueError("ambient rank required for an empty generator list")
            ambient_rank = len(gens[0])
        if ambient_rank > dimension_cap:
            raise DimensionCapExceeded(f"ambient rank {ambient_rank} exceeds cap {dimension_cap}")
        self.ambient_rank = ambient_rank
        self.generators: tuple[tuple[int, ...], ...] = tuple(gens)
        n = ambient_rank
        span_rows, _ = rref(gens, n) if gens else ([], [])
        self._span = [tuple(r) for r in span_rows]
        self.dim = len(self._span)
        self._facets = self._compute_facets()
        if not self._facets:
            lin = [list(primitive(r)) for r in self._span]
        else:
            cons = [[dot(u, b) for b in self._span] for u, _ in self._facets]
            alphas = nullspace(cons, self.dim)
            lin = [list(primitive([sum((a * b[j] for a, b in zip(al, self._span)), Fraction(0)) for j in range(n)]))
                   for al in alphas]
        self.lineality_basis: IntegerMatrix = saturate(n, lin) if lin else IntegerMatrix(0, n, ())

    @classmethod
    def positive_orthant(cls, n: int) -> "RationalCone":
        return cls([tuple(int(i == j) for j in range(n)) for i in range(n)], n)

    @classmethod
    def full_space(cls, n: int) -> "RationalCone":
        gens = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        gens += [tuple(-x for x in g) for g in gens]
        return cls(gens, n)

    def __repr__(self) -> str:
        return f"RationalCone({[list(g) for g in self.generators]})"

    def _compute_facets(self) -> list[tuple[tuple[int, ...], frozenset[int]]]:
        s = self.dim
        gens = self.generators
        if s == 0:
            return []
        nonzero = [i for i, g in enumerate(gens) if any(g)]
        seen: dict[frozenset[int], tuple[int, ...]] = {}
        for combo in combinations(nonzero, s - 1):
            sub_ = [gens[i] for i in combo]
            if sub_ and rank(sub_) != s - 1:
                continue
            cons = [[dot(b, g) for b in self._span] for g in sub_]
            ns = nullspace(cons, s) if cons else nullspace([], s)
            if len(ns) != 1:
                continue
            u = [sum((a * b[j] for a, b in zip(ns[0], self._span)), Fraction(0)) for j in range(self.ambient_rank)]
            vals = [dot(u, g) for g in gens]
            if all(v >= 0 for v in vals):
                pass
            elif all(v <= 0 for v in vals):
                u = [-x for x in u]
                vals = [-v for v in vals]
            else:
                continue
            if all(v == 0 for v in vals):
                continue
            tight = frozenset(i for i, v in enumerate(vals) if v == 0)
            if tight not in seen:
                seen[tight] = primitive(u)
        return sorted(((u, t) for t, u in seen.items()), key=lambda x: sorted(x[1]))

    @property
    def facet_normals(self) -> tuple[tuple[int, ...], ...]:
        return tuple(u for u, _ in self._facets)

    def in_span(self, x: Sequence) -> bool:
        if self.dim == self.ambient_rank:
            return True
        return solve_combination(self._span, [Fraction(t) for t in x]) is not None

    def contains(self, x: Sequence) -> bool:
        return self.in_span(x) and all(dot(u, x) >= 0 for u, _ in self._facets)

    @cached_property
    def faces(self) -> tuple[ConeFace, ...]:
        allg = frozenset(range(len(self.generators)))
        sets = intersection_closure((t for _, t in self._facets), keep_empty=True) if self._facets else set()
        sets.add(allg)
        if self._facets:
            common = allg
            for _, t in self._facets:
                common &= t
            sets.add(common)
        lin = [list(r) for r in self.lineality_basis.entries]
        recs = []
        for s in sets:
            rows = [list(self.generators[i]) for i in sorted(s)] + lin
            dim = rank(rows) if rows else 0
            normals = tuple(u for u, t in self._facets if s <= t)
            basis = saturate(self.ambient_rank, rows) if rows and dim else IntegerMatrix(0, self.ambient_rank, ())
            recs.append((dim, tuple(sorted(s)), normals, basis))
        recs.sort(key=lambda r: (r[0], r[1]))
        return tuple(ConeFace(i, d, g, nm, b) for i, (d, g, nm, b) in enumerate(recs))

    def face_by_generators(self, gens: Iterable[int]) -> ConeFace:
        key = tuple(sorted(gens))
        for f in self.faces:
            if f.generators == key:
                return f
        raise KeyError(key)

    def rays(self) -> list[tuple[int, ...]]:
        """Primitive generators of the one-dimensional faces (pointed cones)."""
        out = []
        base = self.lineality_basis.rows
        for f in self.faces:
            if f.dim == base + 1:
                g = next(self.generators[i] for i in f.generators
                         if rank([list(self.generators[i])] + [list(r) for r in self.lineality_basis.entries]) > base)
                out.append(primitive(g))
        return sorted(out)


def minimal_face(C: RationalCone, x) -> ConeFace:
    """Smallest face of ``C`` containing ``x`` (a point, or a simplex given by its vertices)."""
    if x and isinstance(x[0], (list, tuple)):
        x = centroid(x)
    x = [Fraction(t) for t in x]
    if not C.in_span(x) or any(dot(u, x) < 0 for u, _ in C._facets):
        raise PointOutsideCone(f"{[str(t) for t in x]} is not in the cone")
    gens = frozenset(range(len(C.generators)))
    for u, t in C._facets:
        if dot(u, x) == 0:
            gens &= t
    return C.face_by_generators(gens)


def _is_smooth(gens_rows: list[tuple[int, ...]], expected: int) -> bool:
    if len(gens_rows) != expected:
        return False
    if not gens_rows:
        return True
    snf = smith_normal_form(gens_rows)
    return snf.rank == expected and all(d == 1 for d in snf.d)


def _quotient_rays(C: RationalCone) -> list[tuple[int, ...]]:
    """Primitive ray generators of the cone modulo its lineality space."""
    a = C.lineality_basis.rows
    n = C.ambient_rank
    B = complete_basis(n, C.lineality_basis)
    from .lattice import _inverse_unimodular

    Binv = _inverse_unimodular(B)
    rays = set()
    for f in C.faces:
        if f.dim != a + 1:
            continue
        for i in f.generators:
            g = C.generators[i]
            coords = [sum((g[k] * Binv[k][j] for k in range(n)), Fraction(0)) for j in range(n)]
            tail = coords[a:]
            if any(tail):
                rays.add(primitive(tail))
                break
    return sorted(rays)


def check_cone_assumptions(P: LatticePolytope, K: RationalCone) -> list[str]:
    """Validate the standing assumptions on (Δ, K); returns warnings.

    (1) K smooth, or K pointed with every proper face smooth.
    (2) dim Δ = dim K.
    (3) K is generated by Δ together with its lineality space.
    (4) smoothness of the hypersurface cannot be checked combinatorially.
    """
    n = K.ambient_rank
    if P.ambient_rank != n:
        raise AssumptionViolation(2, "polytope and cone live in lattices of different rank")
    a = K.lineality_basis.rows
    rays = _quotient_rays(K)
    smooth = _is_smooth(rays, K.dim - a)
    if not smooth:
        if a != 0:
            raise AssumptionViolation(1, "singular cone with nontrivial lineality space")
        for f in K.faces:
            if f.dim in (0, K.dim):
                continue
            sub_cone = RationalCone([K.generators[i] for i in f.generators], n)
            if not _is_smooth(sub_cone.rays(), f.dim):
                raise AssumptionViolation(1, f"face {f.generators} of the cone is singular")
    if P.dim != K.dim or K.dim != n:
        raise AssumptionViolation(2, f"dim Δ = {P.dim}, dim K = {K.dim}, rank {n}")
    gens = list(P.vertices) + [tuple(r) for r in K.lineality_basis.entries] + [tuple(-x for x in r) for r in K.lineality_basis.entries]
    generated = RationalCone(gens, n)
    if not all(K.contains(g) for g in generated.generators) or not all(generated.contains(g) for g in K.generators):
        raise AssumptionViolation(3, "the cone is not generated by the polytope up to invertible elements")
    return ["assumption (4): smoothness of the hypersurface is not checked"]
