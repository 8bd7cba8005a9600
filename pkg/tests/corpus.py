"""Shared instances and random generators for the test suite."""
from __future__ import annotations

import random
from itertools import product

from skelet.polytope import LatticePolytope, RationalCone
from skelet.triangulation import StarTriangulation, generate_star_triangulation

O2, O3 = (0, 0), (0, 0, 0)
TWODEX = [(1, 0), (0, 1), (-1, -1)]
TRIANGLE = [(0, 0), (2, 0), (0, 2)]
QUADRIC = [(0, 0, 0), (2, 0, 0), (0, 2, 0), (0, 0, 2)]
TETRA = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)]


def twodex() -> StarTriangulation:
    return generate_star_triangulation(LatticePolytope(TWODEX))


def triangle_fine() -> StarTriangulation:
    return StarTriangulation(LatticePolytope(TRIANGLE), [[O2, (2, 0), (1, 1)], [O2, (1, 1), (0, 2)]])


def triangle_coarse() -> StarTriangulation:
    return StarTriangulation(LatticePolytope(TRIANGLE), [[O2, (2, 0), (0, 2)]])


def quadric_coarse() -> StarTriangulation:
    return StarTriangulation(LatticePolytope(QUADRIC), [QUADRIC])


def quadric_midpoint() -> StarTriangulation:
    a, b, c = (2, 0, 0), (0, 2, 0), (0, 0, 2)
    ab, ac, bc = (1, 1, 0), (1, 0, 1), (0, 1, 1)
    return StarTriangulation(LatticePolytope(QUADRIC),
                             [[O3, a, ab, ac], [O3, b, ab, bc], [O3, c, ac, bc], [O3, ab, ac, bc]])


def tetrahedron() -> StarTriangulation:
    return generate_star_triangulation(LatticePolytope(TETRA))


def pinwheel() -> StarTriangulation:
    """Two nested twisted triangles: the classical non-regular configuration, coned at 0."""
    a = [(4, 0, 0), (0, 4, 0), (0, 0, 4)]
    b = [(2, 1, 1), (1, 2, 1), (1, 1, 2)]
    bot = (-1, -1, -1)
    tris = [tuple(b)]
    for i in range(3):
        j = (i + 1) % 3
        tris += [(a[i], a[j], b[j]), (a[i], b[j], b[i])]
        tris.append((a[i], a[j], bot))
    P = LatticePolytope(a + [bot])
    return StarTriangulation(P, [[O3, *t] for t in tris])


def orthant(r: int) -> RationalCone:
    return RationalCone.positive_orthant(r)


def boundary_points(P: LatticePolytope) -> list[tuple[int, ...]]:
    """Lattice points on facets of P that avoid the origin."""
    ineq = [(a, b) for a, b in P.facet_inequalities() if b != 0]
    return [p for p in P.lattice_points() if any(sum(x * y for x, y in zip(a, p)) == b for a, b in ineq)]


def random_polytope(rng: random.Random, rank: int, box: int = 2, interior: bool = True) -> LatticePolytope:
    """Random full-dimensional lattice polytope, with the origin interior if asked."""
    while True:
        k = rng.randint(rank + 1, rank + 3)
        pts = {tuple(rng.randint(-box, box) for _ in range(rank)) for _ in range(k)}
        pts.discard((0,) * rank)
        if len(pts) <= rank:
            continue
        P = LatticePolytope(pts)
        if not P.is_full_dimensional:
            continue
        ineq = P.facet_inequalities()
        zero_val = [b for _, b in ineq]
        if interior and all(b < 0 for b in zero_val):
            return P


def random_triangulation(rng: random.Random, P: LatticePolytope, fine: bool = True) -> StarTriangulation:
    extra = boundary_points(P) if fine else []
    return generate_star_triangulation(P, "random", points=extra, seed=rng.randrange(10 ** 6))


def random_unimodular(rng: random.Random, r: int, steps: int = 3) -> list[list[int]]:
    """Product of a few elementary matrices and a signed permutation."""
    g = [[int(i == j) for j in range(r)] for i in range(r)]
    for _ in range(steps):
        i, j = rng.sample(range(r), 2)
        c = rng.choice((-1, 1))
        for k in range(r):
            g[i][k] += c * g[j][k]
    perm = list(range(r))
    rng.shuffle(perm)
    signs = [rng.choice((-1, 1)) for _ in range(r)]
    return [[signs[i] * g[perm[i]][k] for k in range(r)] for i in range(r)]


def corpus(seed: int = 7, count2: int = 12, count3: int = 10, fine: bool = True) -> list[StarTriangulation]:
    rng = random.Random(seed)
    out = []
    for rank, count in ((2, count2), (3, count3)):
        for _ in range(count):
            P = random_polytope(rng, rank)
            out.append(random_triangulation(rng, P, fine=fine))
    return out
