"""Facet census of the toric degeneration attached to a regular star triangulation."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import CertificateMismatch, SignConditionViolated, SupportMismatch
from .lp import solve_lp
from .polytope import RationalCone
from .rational import rank, solve
from .triangulation import HeightCertificate, StarTriangulation, verify_certificate

Point = tuple[int, ...]


@dataclass(frozen=True)
class OvergraphFacet:
    normal: tuple[int, ...]  # inner normal in M x Z
    generators: tuple[Point, ...]  # base points m of the lifted generators on the facet
    contains_t: bool  # whether the facet contains (0, 1)


@dataclass(frozen=True)
class OvergraphCone:
    """The cone ``{(m, r) : m in R_{>=0} Δ, r >= h(m)}`` with its facets."""

    ambient_rank: int
    heights: tuple[tuple[Point, int], ...]  # h at the boundary vertices
    cone: RationalCone
    facets: tuple[OvergraphFacet, ...]

    def height(self, v: Sequence[int]) -> int:
        return dict(self.heights)[tuple(v)]

    def contains(self, x: Sequence) -> bool:
        return self.cone.contains(x)


def _in_cone_of(vertices: Sequence[Point], p: Sequence[int]) -> bool:
    cols = [[v[i] for v in vertices] for i in range(len(p))]
    return solve_lp(cols, list(p)).status == "optimal"


def _homogeneous_heights(T: StarTriangulation, h: Mapping[Sequence[int], object]) -> dict[Point, Fraction]:
    """Vertex heights of the piecewise-linear ``h`` given by values at arbitrary points."""
    vals = {tuple(int(x) for x in p): Fraction(v) for p, v in h.items()}
    out: dict[Point, Fraction] = {}
    for tau in T.boundary_facets:
        verts = T.coords(tau)
        pts = [p for p in vals if any(p) and _in_cone_of(verts, p)]
        rows = [list(p) for p in pts]
        if not rows or rank(rows) < T.rank:
            raise CertificateMismatch(f"height values do not determine h on the cone over {verts}")
        ell = solve(rows, [vals[p] for p in pts])
        if ell is None:
            raise CertificateMismatch(f"height values are inconsistent on the cone over {verts}")
        for v in verts:
            x = sum((a * b for a, b in zip(ell, v)), Fraction(0))
            if out.setdefault(v, x) != x:
                raise CertificateMismatch(f"h is not continuous at {v}")
    return out


def overgraph_cone(T: StarTriangulation, h: HeightCertificate | Mapping[Sequence[int], object]) -> OvergraphCone:
    """Overgraph cone of the convex piecewise-linear function ``h``.

    ``h`` is either a height certificate for ``T`` (values on all vertices,
    including 0; ``h`` is then the homogenization ``v -> ω(v) - ω(0)``) or
    a table of values of ``h`` itself at points of the support.  The facets
    not containing ``(0, 1)`` must be exactly the lifts of the n-simplices of
    ``T``, otherwise ``h`` does not belong to ``T``.
    """
    if isinstance(h, HeightCertificate):
        if not verify_certificate(T, h):
            raise CertificateMismatch("height certificate does not certify this triangulation")
        w = h.as_dict()
        base = Fraction(w[T.points[T.origin]])
        heights = {T.points[i]: Fraction(w[T.points[i]]) - base for i in T.boundary_vertices}
    else:
        heights = _homogeneous_heights(T, h)
    if any(x.denominator != 1 for x in heights.values()):
        raise CertificateMismatch("h is not integral on the vertices")
    r = T.rank + 1
    t = (0,) * T.rank + (1,)
    gens = [v + (int(heights[v]),) for v in sorted(heights)] + [t]
    C = RationalCone(gens, r)
    facets = []
    for u, tight in C._facets:
        base_pts = tuple(sorted(gens[i][:-1] for i in tight if gens[i] != t))
        facets.append(OvergraphFacet(tuple(u), base_pts, (len(gens) - 1) in tight))
    G = OvergraphCone(r, tuple(sorted((v, int(x)) for v, x in heights.items())), C, tuple(facets))
    lifted = {tuple(sorted(T.coords(s))) for s in T.boundary_facets}
    got = {f.generators for f in facets if not f.contains_t}
    if got != lifted:
        raise CertificateMismatch("h is not strictly convex along the walls of the triangulation")
    return G


@dataclass(frozen=True)
class DivisorClassification:
    """Vertical divisors match n-simplices of the boundary part; horizontal ones
    match n-simplices through 0 lying in the boundary of Δ (listed without 0)."""

    vertical: tuple[tuple[Point, ...], ...]
    horizontal: tuple[tuple[Point, ...], ...]
    vertical_normals: tuple[tuple[int, ...], ...]
    horizontal_normals: tuple[tuple[int, ...], ...]


def classify_divisors(G: OvergraphCone, T: StarTriangulation) -> DivisorClassification:
    """Split the facets of the overgraph cone by whether ``t = z^(0,1)`` vanishes on them.

    ``t`` vanishes on a toric divisor exactly when the facet misses
    ``(0, 1)``; those are the components of the central fibre.
    """
    vert, hor, vn, hn = [], [], [], []
    ridges = {tuple(sorted(p for p in T.coords(s) if any(p))) for s in T.origin_ridges}
    for f in sorted(G.facets, key=lambda f: (f.contains_t, f.generators)):
        if f.contains_t:
            if f.generators not in ridges:
                raise CertificateMismatch(f"horizontal facet over {f.generators} has no simplex")
            hor.append(f.generators)
            hn.append(f.normal)
        else:
            vert.append(f.generators)
            vn.append(f.normal)
    return DivisorClassification(tuple(vert), tuple(hor), tuple(vn), tuple(hn))


@dataclass(frozen=True)
class RestrictedPolynomial:
    simplex: tuple[Point, ...]
    constant: Fraction
    terms: tuple[tuple[Point, Fraction], ...]

    @property
    def ell(self) -> tuple[tuple[Point, Fraction], ...]:
        """Homogeneous part: the monomial terms without the constant."""
        return self.terms

    def evaluate(self, z: Sequence, homogeneous: bool = False) -> Fraction:
        total = Fraction(0) if homogeneous else self.constant
        for m, a in self.terms:
            term = a
            for zi, e in zip(z, m):
                term *= Fraction(zi) ** e
            total += term
        return total


def restrict_polynomial(f: Mapping[Sequence[int], object], T: StarTriangulation,
                        tau: Sequence[Sequence[int]]) -> RestrictedPolynomial:
    """``f_τ``: the constant term plus the monomials at the vertices of τ.

    ``f`` maps exponents to coefficients; its support must be 0 together with
    the vertices of the boundary part, with negative constant and positive
    vertex coefficients.
    """
    coeffs = {tuple(int(x) for x in m): Fraction(a) for m, a in f.items()}
    coeffs = {m: a for m, a in coeffs.items() if a != 0}
    zero = (0,) * T.rank
    support = {zero} | {T.points[i] for i in T.boundary_vertices}
    if set(coeffs) != support:
        raise SupportMismatch(f"support {sorted(coeffs)} differs from {sorted(support)}")
    if coeffs[zero] >= 0:
        raise SignConditionViolated("constant term must be negative")
    bad = [m for m, a in coeffs.items() if m != zero and a <= 0]
    if bad:
        raise SignConditionViolated(f"coefficients at {bad} must be positive")
    verts = tuple(sorted(tuple(int(x) for x in p) for p in tau))
    if zero in verts or not all(v in T.index for v in verts):
        raise SupportMismatch(f"{list(verts)} is not a simplex of the boundary part")
    s = tuple(sorted(T.index[v] for v in verts))
    if s not in set(T.cells):
        raise SupportMismatch(f"{list(verts)} is not a simplex of the boundary part")
    return RestrictedPolynomial(verts, coeffs[zero], tuple((v, coeffs[v]) for v in verts))
