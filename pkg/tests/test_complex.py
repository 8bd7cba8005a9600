import random

from hypothesis import given, settings
from hypothesis import strategies as st

from skelet.complex import Cell, ChainComplex, RationalCellComplex, product_with_simplex
from skelet.errors import NotAComplex
from skelet.homology import homology
from skelet.torus import subgroup_subcomplex, torus_arrangement

import pytest


def octahedron() -> RationalCellComplex:
    verts = [(s * (i == 0), s * (i == 1), s * (i == 2)) for i in range(3) for s in (1, -1)]
    tris = [(a, b, c) for a in verts[0:2] for b in verts[2:4] for c in verts[4:6]]
    faces = set()
    for t in tris:
        for mask in range(1, 8):
            faces.add(tuple(sorted(x for j, x in enumerate(t) if mask >> j & 1)))
    cells = [Cell(f, len(f) - 1) for f in faces]
    bnd = {f: {f[:j] + f[j + 1:]: (-1) ** j for j in range(len(f))} for f in faces if len(f) > 1}
    return RationalCellComplex(cells, bnd)


def test_octahedron_sphere():
    H = homology(octahedron())
    assert H.betti == (1, 0, 1) and H.torsion_free


def test_klein_bottle_torsion():
    X = RationalCellComplex([Cell("v", 0), Cell("a", 1), Cell("b", 1), Cell("F", 2)], {"F": {"b": 2}})
    H = homology(X)
    assert H.betti == (1, 1, 0)
    assert H.torsion[1].invariant_factors == (2,)


def test_projective_plane():
    X = RationalCellComplex([Cell("v", 0), Cell("a", 1), Cell("F", 2)], {"F": {"a": 2}})
    H = homology(X)
    assert H.betti == (1, 0, 0) and H.torsion[1].invariant_factors == (2,)


def test_points():
    X = RationalCellComplex([Cell(i, 0) for i in range(5)], {})
    assert homology(X).betti == (5,)


def test_bad_boundary_rejected():
    with pytest.raises(NotAComplex):
        RationalCellComplex([Cell("v", 0), Cell("a", 1), Cell("F", 2)], {"a": {"v": 1}, "F": {"a": 1}})


def test_circle_with_two_cells():
    A = torus_arrangement(1, [((2,), 0)])
    assert A.counts() == (2, 2)
    assert homology(A).betti == (1, 1)


def test_triangulated_torus():
    A = torus_arrangement(2, [((1, 0), 0), ((0, 1), 0), ((1, 1), 0)])
    assert A.counts() == (1, 3, 2)
    assert homology(A).betti == (1, 2, 1)


def test_square_torus():
    A = torus_arrangement(2)
    assert A.counts() == (1, 2, 1)
    assert homology(A).betti == (1, 2, 1)


def test_subgroup_two_circles():
    A = torus_arrangement(2, [((2, 0), 0)])
    S = subgroup_subcomplex(A, [(2, 0)])
    assert homology(S).betti == (2, 2)
    assert len(subgroup_subcomplex(A, [])) == len(A)
    B = torus_arrangement(2)
    assert subgroup_subcomplex(B, [(1, 0), (0, 1)]).counts() == (1,)


def test_products():
    circle = torus_arrangement(1, [((2,), 0)])
    cyl = product_with_simplex(("p", "q"), circle)
    assert homology(cyl).betti[:2] == (1, 1) and homology(cyl).betti[2:] == (0,) and cyl.euler_characteristic() == 0
    pt = product_with_simplex(("p",), circle)
    assert pt.counts() == circle.counts()
    dot = RationalCellComplex([Cell("*", 0)], {})
    tri = product_with_simplex(("a", "b", "c"), dot)
    assert tri.counts() == (3, 3, 1) and homology(tri).betti == (1, 0, 0)


def _random_chain(rng):
    X = octahedron() if rng.random() < 0.2 else None
    if X is not None:
        return X
    nv = rng.randint(2, 7)
    tops = {tuple(sorted(rng.sample(range(nv), rng.randint(1, min(4, nv))))) for _ in range(rng.randint(1, 6))}
    faces = set()
    for s in tops:
        for mask in range(1, 2 ** len(s)):
            faces.add(tuple(x for j, x in enumerate(s) if mask >> j & 1))
    cells = [Cell(f, len(f) - 1) for f in faces]
    bnd = {f: {f[:j] + f[j + 1:]: (-1) ** j for j in range(len(f))} for f in faces if len(f) > 1}
    return RationalCellComplex(cells, bnd)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_random_complex_invariants(seed):
    X = _random_chain(random.Random(seed))
    X.chain_complex().check()
    H = homology(X)
    assert H.euler_characteristic == X.euler_characteristic()
    # closure of everything is everything, and products multiply Euler characteristics
    assert X.is_closed(c.key for c in X.cells)
    P = product_with_simplex(("u", "v"), X)
    assert P.euler_characteristic() == X.euler_characteristic()
    HP = homology(P)
    assert HP.betti == H.betti + (0,) and HP.torsion[:len(H.torsion)] == H.torsion


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=6, max_size=6))
def test_two_term_complex_matches_snf(entries):
    from skelet.lattice import smith_normal_form

    d1 = [entries[:3], entries[3:]]
    H = homology(ChainComplex.from_matrices([2, 3], {1: d1}))
    d = smith_normal_form(d1).d
    assert H.betti == (2 - len(d), 3 - len(d))
    assert H.torsion[0].invariant_factors == tuple(x for x in d if x > 1)
