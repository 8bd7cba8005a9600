"""Star triangulations based at the origin, regularity certificates, generation.

A :class:`StarTriangulation` stores the maximal simplices of the triangulation
of Δ; each contains the origin.  The boundary part consists of all faces that
avoid the origin.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import lcm
from typing import Mapping, Sequence, Union

from .errors import (
    DegenerateHeights,
    GapOrOverlap,
    InternalInvariantError,
    NotFullDimensional,
    NotSimplicial,
    NotStarShaped,
    OriginMissing,
    PointOutsideSupport,
)
from .lattice import smith_normal_form
from .lp import solve_lp, verify_farkas
from .polytope import LatticePolytope, normalized_volume
from .rational import affine_coordinates, affine_rank, dot, int_det, solve_combination, sub

Point = tuple[int, ...]
Simplex = tuple[int, ...]


class StarTriangulation:
    """Triangulation of a full-dimensional lattice polytope, starred at 0.

    ``simplices`` may be given as tuples of coordinates.  Internally every
    simplex is a sorted tuple of indices into ``points``, which is the sorted
    list of all vertices used.
    """

    def __init__(self, polytope: LatticePolytope, simplices: Sequence[Sequence[Sequence[int]]]):
        self.polytope = polytope
        if not polytope.is_full_dimensional:
            raise NotFullDimensional("star triangulations need a full-dimensional polytope")
        r = polytope.ambient_rank
        self.rank = r
        self.n = r - 1
        pts = sorted({tuple(int(x) for x in p) for s in simplices for p in s})
        zero = (0,) * r
        if zero not in pts:
            raise OriginMissing("the origin is not a vertex of the triangulation")
        self.points: tuple[Point, ...] = tuple(pts)
        self.index = {p: i for i, p in enumerate(pts)}
        self.origin = self.index[zero]
        maximal = set()
        for s in simplices:
            idx = tuple(sorted(self.index[tuple(int(x) for x in p)] for p in s))
            if len(set(idx)) != len(idx):
                raise NotSimplicial(f"repeated vertex in simplex {s}")
            maximal.add(idx)
        self.maximal: tuple[Simplex, ...] = tuple(sorted(maximal))

    def __repr__(self) -> str:
        return f"StarTriangulation({len(self.maximal)} maximal simplices, {len(self.points)} vertices)"

    def coords(self, simplex: Sequence[int]) -> list[Point]:
        return [self.points[i] for i in simplex]

    @cached_property
    def boundary_facets(self) -> tuple[Simplex, ...]:
        """Maximal simplices of the boundary part (the n-simplices)."""
        return tuple(sorted(tuple(i for i in s if i != self.origin) for s in self.maximal))

    @cached_property
    def cells(self) -> tuple[Simplex, ...]:
        """All simplices of the boundary part, sorted by dimension then indices."""
        out = set()
        for f in self.boundary_facets:
            for k in range(1, len(f) + 1):
                out.update(combinations(f, k))
        return tuple(sorted(out, key=lambda s: (len(s), s)))

    def simplices_of_dim(self, k: int) -> list[Simplex]:
        return [s for s in self.cells if len(s) == k + 1]

    @cached_property
    def boundary_vertices(self) -> tuple[int, ...]:
        return tuple(sorted({i for f in self.boundary_facets for i in f}))

    @staticmethod
    def faces_with_signs(simplex: Simplex) -> list[tuple[int, Simplex]]:
        if len(simplex) == 1:
            return []
        return [((-1) ** i, simplex[:i] + simplex[i + 1:]) for i in range(len(simplex))]

    @cached_property
    def origin_ridges(self) -> tuple[Simplex, ...]:
        """n-simplices containing 0 that lie in the boundary of Δ."""
        ineq = self.polytope.facet_inequalities()
        out = set()
        for s in self.maximal:
            for i in s:
                if i == self.origin:
                    continue
                face = tuple(j for j in s if j != i)
                pts = self.coords(face)
                if any(all(dot(a, p) == b for p in pts) for a, b in ineq):
                    out.add(face)
        return tuple(sorted(out))

    @cached_property
    def origin_interior(self) -> bool:
        zero = (0,) * self.rank
        return all(dot(a, zero) > b for a, b in self.polytope.facet_inequalities())

    def transformed(self, g: Sequence[Sequence[int]]) -> "StarTriangulation":
        """Image under the linear map x -> g x."""
        def ap(p):
            return tuple(sum(g[i][j] * p[j] for j in range(self.rank)) for i in range(self.rank))

        P = LatticePolytope([ap(v) for v in self.polytope.vertices])
        T = StarTriangulation(P, [[ap(p) for p in self.coords(s)] for s in self.maximal])
        return T

    @cached_property
    def regularity(self) -> Union["HeightCertificate", "FarkasWitness"]:
        return check_regularity(self)

    @property
    def is_regular(self) -> bool:
        return isinstance(self.regularity, HeightCertificate)


@dataclass(frozen=True)
class ValidationReport:
    volume: int
    maximal_simplices: int
    boundary_simplices: int
    origin_interior: bool
    support_facets: tuple[tuple[int, ...], ...]
    discarded_points: tuple[Point, ...] = ()


def _simplex_det(T: StarTriangulation, s: Simplex) -> int:
    return int_det([T.points[i] for i in s if i != T.origin])


def _improper_pair(T: StarTriangulation, s1: Simplex, s2: Simplex) -> bool:
    p1, p2 = T.coords(s1), T.coords(s2)
    r = T.rank
    for k in range(r):
        if max(p[k] for p in p1) < min(p[k] for p in p2) or max(p[k] for p in p2) < min(p[k] for p in p1):
            return False
    common = set(s1) & set(s2)
    rows = []
    for k in range(r):
        rows.append([p[k] for p in p1] + [-p[k] for p in p2])
    rows.append([1] * len(p1) + [0] * len(p2))
    rows.append([0] * len(p1) + [1] * len(p2))
    rhs = [0] * r + [1, 1]
    cost = [0 if i in common else 1 for i in s1] + [0] * len(p2)
    res = solve_lp(rows, rhs, cost)
    return res.status == "optimal" and res.value > 0


def validate_triangulation(T: StarTriangulation) -> ValidationReport:
    """Check that ``T`` is a lattice star triangulation of its polytope."""
    P = T.polytope
    for p in T.points:
        if not P.contains(p):
            raise GapOrOverlap(f"vertex {p} lies outside the polytope")
    outer = [(a, b) for a, b in P.facet_inequalities() if b != 0]
    support = set()
    for s in T.maximal:
        if len(s) != T.rank + 1:
            raise NotSimplicial(f"simplex {T.coords(s)} has {len(s)} vertices, expected {T.rank + 1}")
        if T.origin not in s:
            raise NotStarShaped(f"simplex {T.coords(s)} does not contain the origin")
        if _simplex_det(T, s) == 0:
            raise NotSimplicial(f"simplex {T.coords(s)} is degenerate")
        opp = [T.points[i] for i in s if i != T.origin]
        hit = [k for k, (a, b) in enumerate(outer) if all(dot(a, p) == b for p in opp)]
        if not hit:
            raise NotStarShaped(f"face {opp} is not contained in a facet of Δ avoiding the origin")
        support.update(hit)
    vol = normalized_volume(P)
    total = sum(abs(_simplex_det(T, s)) for s in T.maximal)
    if total != vol:
        raise GapOrOverlap(f"simplex volumes sum to {total}, polytope volume is {vol}")
    bf = T.boundary_facets
    for i in range(len(bf)):
        for j in range(i + 1, len(bf)):
            if _improper_pair(T, bf[i], bf[j]):
                raise NotSimplicial(f"simplices {T.coords(bf[i])} and {T.coords(bf[j])} meet improperly")
    return ValidationReport(
        volume=vol,
        maximal_simplices=len(T.maximal),
        boundary_simplices=len(bf),
        origin_interior=T.origin_interior,
        support_facets=tuple(outer[k][0] for k in sorted(support)),
    )


@dataclass(frozen=True)
class HeightCertificate:
    """Integral convex heights: ``values`` maps each vertex to h(v)."""

    values: tuple[tuple[Point, int], ...]
    margin: Fraction

    def as_dict(self) -> dict[Point, int]:
        return dict(self.values)

    def __getitem__(self, p: Sequence[int]) -> int:
        return self.as_dict()[tuple(p)]


@dataclass(frozen=True)
class FarkasWitness:
    """Nonnegative multipliers ``y`` with ``y^T A <= 0`` and ``sum y > 0``.

    ``A`` holds the fold inequalities ``A h >= 1`` over the nonzero vertices
    listed in ``variables``; such ``y`` proves that no convex lift exists.
    """

    variables: tuple[Point, ...]
    constraints: tuple[tuple[Fraction, ...], ...]
    multipliers: tuple[Fraction, ...]

    def verify(self) -> bool:
        if any(y < 0 for y in self.multipliers) or sum(self.multipliers) <= 0:
            return False
        for j in range(len(self.variables)):
            if sum((y * row[j] for y, row in zip(self.multipliers, self.constraints)), Fraction(0)) > 0:
                return False
        return True


def fold_constraints(T: StarTriangulation) -> tuple[list[int], list[list[Fraction]]]:
    """Rows of the strict convexity system ``A h >= 1`` over nonzero vertices."""
    var = [i for i in range(len(T.points)) if i != T.origin]
    col = {v: k for k, v in enumerate(var)}
    by_wall: dict[Simplex, list[Simplex]] = {}
    for s in T.maximal:
        for i in s:
            if i == T.origin:
                continue
            wall = tuple(j for j in s if j != i)
            by_wall.setdefault(wall, []).append(s)
    rows = []
    for wall, owners in sorted(by_wall.items()):
        if len(owners) != 2:
            continue
        for s1, s2 in (owners, owners[::-1]):
            (b,) = set(s2) - set(s1)
            base = [i for i in s1 if i != T.origin]
            mu = solve_combination([T.points[i] for i in base], T.points[b])
            row = [Fraction(0)] * len(var)
            row[col[b]] += 1
            for w, m in zip(base, mu):
                row[col[w]] -= m
            rows.append(row)
    return var, rows


def check_regularity(T: StarTriangulation) -> HeightCertificate | FarkasWitness:
    """Decide regularity by exact LP.

    Returns an integral :class:`HeightCertificate` or a verified
    :class:`FarkasWitness`.
    """
    var, A = fold_constraints(T)
    k = len(var)
    m = len(A)
    if m == 0:
        h = [Fraction(1)] * k
    else:
        rows = [row + [Fraction(-int(i == j)) for j in range(m)] for i, row in enumerate(A)]
        res = solve_lp(rows, [1] * m)
        if res.status == "infeasible":
            y = tuple(res.farkas)
            if not verify_farkas(rows, [1] * m, y):
                raise InternalInvariantError("Farkas witness failed re-verification")
            w = FarkasWitness(tuple(T.points[i] for i in var), tuple(tuple(r) for r in A), y)
            if not w.verify():
                raise InternalInvariantError("Farkas witness failed re-verification")
            return w
        h = list(res.x[:k])
    scale = lcm(*(x.denominator for x in h)) if h else 1
    expo = 1
    for s in T.maximal:
        d = smith_normal_form([list(T.points[i]) for i in s if i != T.origin]).d
        expo = lcm(expo, d[-1])
    ints = [int(x * scale) * expo for x in h]
    slacks = [sum((a * v for a, v in zip(row, ints)), Fraction(0)) for row in A]
    margin = min(slacks) if slacks else Fraction(1)
    values = [(T.points[T.origin], 0)] + [(T.points[i], v) for i, v in zip(var, ints)]
    cert = HeightCertificate(tuple(sorted(values)), Fraction(margin))
    if not verify_certificate(T, cert):
        raise InternalInvariantError("height certificate failed re-verification")
    return cert


def pl_value(T: StarTriangulation, heights: Mapping[Point, Fraction], x: Sequence) -> Fraction:
    """Value of the piecewise linear extension of ``heights`` at ``x``."""
    for s in T.maximal:
        base = [i for i in s if i != T.origin]
        lam = solve_combination([T.points[i] for i in base], [Fraction(t) for t in x])
        if lam is not None and all(l >= 0 for l in lam):
            return sum((l * heights[T.points[i]] for l, i in zip(lam, base)), Fraction(0))
    raise PointOutsideSupport(f"{x} is not covered by the triangulation")


def verify_certificate(T: StarTriangulation, cert: HeightCertificate) -> bool:
    vals = cert.as_dict()
    if vals.get(T.points[T.origin]) != 0 or any(v < 0 or int(v) != v for v in vals.values()):
        return False
    if cert.margin <= 0:
        return False
    var, A = fold_constraints(T)
    hv = [vals[T.points[i]] for i in var]
    for row in A:
        if sum((a * v for a, v in zip(row, hv)), Fraction(0)) < cert.margin:
            return False
    for p in T.polytope.lattice_points():
        if pl_value(T, vals, p).denominator != 1:
            return False
    return True


HeightSpec = Union[Mapping[Sequence[int], Fraction], str]


def _lex_positive(real: Fraction, pert: dict[int, Fraction]) -> int:
    if real != 0:
        return 1 if real > 0 else -1
    for k in sorted(pert):
        if pert[k] != 0:
            return 1 if pert[k] > 0 else -1
    return 0


def _lower_simplices(pts: list[Point], gidx: list[int], hts: list[Fraction], perturb: bool) -> list[tuple[int, ...]]:
    _, _, coords = affine_coordinates(pts)
    d = len(coords[0]) if coords else 0
    out = []
    for combo in combinations(range(len(pts)), d + 1):
        cs = [coords[i] for i in combo]
        if affine_rank(cs) != d:
            continue
        ok = True
        tie = False
        for q in range(len(pts)):
            if q in combo:
                continue
            lam = solve_combination([list(c) + [1] for c in cs], list(coords[q]) + [1])
            real = hts[q] - sum((l * hts[i] for l, i in zip(lam, combo)), Fraction(0))
            if not perturb:
                # a tie only matters on a lower face
                tie = tie or real == 0
                sign = 1 if real >= 0 else -1
            else:
                pert = {gidx[q]: Fraction(1)}
                for l, i in zip(lam, combo):
                    pert[gidx[i]] = pert.get(gidx[i], Fraction(0)) - l
                sign = _lex_positive(real, pert)
            if sign <= 0:
                ok = False
                break
        if ok and tie:
            raise DegenerateHeights("tie in the lifted point configuration")
        if ok:
            out.append(combo)
    return out


def generate_star_triangulation(
    P: LatticePolytope,
    heights: HeightSpec = "squared-norm",
    points: Sequence[Sequence[int]] | None = None,
    perturb: bool = True,
    seed: int = 0,
) -> StarTriangulation:
    """Regular star triangulation from lifted heights.

    Args:
        P: full-dimensional lattice polytope containing the origin.
        heights: mapping point -> height, ``"random"`` or ``"squared-norm"``.
        points: extra lattice points of P offered as vertices.  Points not
            on a facet avoiding the origin cannot be vertices and are skipped.
        perturb: resolve ties by a lexicographic symbolic perturbation.
        seed: seed for ``"random"`` heights.
    """
    if not P.is_full_dimensional:
        raise NotFullDimensional("star triangulations need a full-dimensional polytope")
    r = P.ambient_rank
    zero = (0,) * r
    if not P.contains(zero):
        raise OriginMissing("the polytope does not contain the origin")
    cand = set(P.vertices) | {tuple(int(x) for x in p) for p in (points or [])}
    for p in cand:
        if not P.contains(p):
            raise GapOrOverlap(f"point {p} lies outside the polytope")
    cand.discard(zero)
    cand = sorted(cand)
    gidx = {p: i for i, p in enumerate(cand)}
    if isinstance(heights, str):
        if heights == "squared-norm":
            hmap = {p: Fraction(sum(x * x for x in p)) for p in cand}
        elif heights == "random":
            rng = random.Random(seed)
            hmap = {p: Fraction(rng.randint(0, 1000)) for p in cand}
        else:
            raise ValueError(f"unknown height mode {heights!r}")
    else:
        given = {tuple(int(x) for x in k): Fraction(v) for k, v in heights.items()}
        missing = [p for p in cand if p not in given]
        if missing:
            raise ValueError(f"no height given for {missing}")
        hmap = given
    simplices = []
    used = set()
    for a, b in P.facet_inequalities():
        if b == 0:
            continue
        on = [p for p in cand if dot(a, p) == b]
        lows = _lower_simplices(on, [gidx[p] for p in on], [hmap[p] for p in on], perturb)
        for combo in lows:
            s = [on[i] for i in combo]
            used.update(s)
            simplices.append([zero] + s)
    T = StarTriangulation(P, simplices)
    T.discarded = tuple(p for p in cand if p not in used)
    validate_triangulation(T)
    if not T.is_regular:
        raise InternalInvariantError("lifted triangulation failed the regularity check")
    return T


def carrier_simplex(T: StarTriangulation, x: Sequence) -> Simplex:
    """Smallest simplex of the boundary part containing ``x``."""
    xf = [Fraction(t) for t in x]
    for f in T.boundary_facets:
        mu = solve_combination(T.coords(f), xf)
        if mu is None or any(m < 0 for m in mu) or sum(mu) != 1:
            continue
        return tuple(i for i, m in zip(f, mu) if m != 0)
    raise PointOutsideSupport(f"{[str(t) for t in xf]} is not in the boundary part")
