"""Fiber groups over simplices of the boundary part.

For a simplex τ avoiding the origin, ``G_τ`` is the subgroup of the torus
``R^{n+1}/Z^{n+1}`` of characters trivial on the vertices of τ.  Its
component group ``D_τ`` is finite; ``A_τ`` is the identity component.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import NotAFace, SimplexContainsOrigin
from .lattice import FiniteAbelianGroup, IntegerMatrix, LatticeQuotient, lattice_quotient
from .polytope import ConeFace, RationalCone, check_cone_assumptions, minimal_face
from .rational import solve_combination
from .triangulation import Simplex, StarTriangulation


@dataclass(frozen=True)
class FiberGroup:
    simplex: Simplex
    vertices: tuple[tuple[int, ...], ...]
    quotient: LatticeQuotient
    torus_rank: int

    @property
    def components(self) -> FiniteAbelianGroup:
        return self.quotient.torsion

    @property
    def coset_reps(self) -> tuple[tuple[Fraction, ...], ...]:
        return self.quotient.coset_reps

    def component_of(self, theta: Sequence) -> int:
        return self.quotient.index_of(theta)


@dataclass(frozen=True)
class RestrictionMap:
    source: Simplex
    target: Simplex
    images: tuple[int, ...]

    def __call__(self, i: int) -> int:
        return self.images[i]


@dataclass(frozen=True)
class QuotientFiberGroup:
    """Image of ``G_σ`` in ``Hom(L_F, S^1)`` with ``F`` the cone face at σ.

    ``basis`` holds the HNF basis of ``L_F`` (rows in M coordinates) and
    ``vertex_coords`` the vertices of σ expressed in that basis.
    """

    simplex: Simplex
    face: ConeFace
    basis: IntegerMatrix
    vertex_coords: tuple[tuple[int, ...], ...]
    quotient: LatticeQuotient
    torus_rank: int

    @property
    def components(self) -> FiniteAbelianGroup:
        return self.quotient.torsion

    @property
    def coset_reps(self):
        return self.quotient.coset_reps


def _check_simplex(T: StarTriangulation, tau: Sequence[int]) -> Simplex:
    tau = tuple(sorted(tau))
    if T.origin in tau:
        raise SimplexContainsOrigin(f"simplex {T.coords(tau)} contains the origin")
    if tau not in set(T.cells):
        raise NotAFace(f"{T.coords(tau)} is not a simplex of the boundary part")
    return tau


def fiber_group(T: StarTriangulation, tau: Sequence[int]) -> FiberGroup:
    tau = _check_simplex(T, tau)
    verts = tuple(T.points[i] for i in tau)
    q = lattice_quotient(T.rank, verts)
    return FiberGroup(tau, verts, q, q.free_rank)


def fiber_table(T: StarTriangulation) -> dict[Simplex, FiberGroup]:
    """All fiber groups of the boundary part, built once."""
    cache = T.__dict__.setdefault("_fiber_table", {})
    if not cache:
        for s in T.cells:
            cache[s] = fiber_group(T, s)
    return cache


def restriction_map(T: StarTriangulation, source: Sequence[int], target: Sequence[int]) -> RestrictionMap:
    """Restriction ``D_source -> D_target`` for ``target`` a face of ``source``."""
    src = _check_simplex(T, source)
    tgt = _check_simplex(T, target)
    if not set(tgt) <= set(src):
        raise NotAFace(f"{T.coords(tgt)} is not a face of {T.coords(src)}")
    table = fiber_table(T)
    G, H = table[src], table[tgt]
    return RestrictionMap(src, tgt, tuple(H.component_of(th) for th in G.coset_reps))


def quotient_fiber_group(T: StarTriangulation, sigma: Sequence[int], K: RationalCone) -> QuotientFiberGroup:
    check_cone_assumptions(T.polytope, K)
    sigma = _check_simplex(T, sigma)
    face = minimal_face(K, T.coords(sigma))
    return _quotient_fiber(T, sigma, face)


def _quotient_fiber(T: StarTriangulation, sigma: Simplex, face: ConeFace) -> QuotientFiberGroup:
    basis = face.span_lattice_basis
    rows = [list(r) for r in basis.entries]
    coords = []
    for i in sigma:
        c = solve_combination(rows, T.points[i])
        coords.append(tuple(int(x) for x in c))
    q = lattice_quotient(basis.rows, coords)
    return QuotientFiberGroup(sigma, face, basis, tuple(coords), q, q.free_rank)
