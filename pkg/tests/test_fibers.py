from fractions import Fraction

import pytest

from corpus import O2, orthant, quadric_coarse, triangle_fine, twodex
from skelet.errors import NotAFace, SimplexContainsOrigin
from skelet.fibers import fiber_group, quotient_fiber_group, restriction_map


def _simplex(T, *pts):
    return tuple(sorted(T.index[p] for p in pts))


def test_vertex_b_two_circles():
    T = triangle_fine()
    G = fiber_group(T, _simplex(T, (2, 0)))
    assert G.torus_rank == 1 and G.components.order == 2


def test_vertex_d_single_circle():
    T = triangle_fine()
    G = fiber_group(T, _simplex(T, (1, 1)))
    assert G.torus_rank == 1 and G.components.order == 1


def test_octahedron_facet():
    T = quadric_coarse()
    G = fiber_group(T, _simplex(T, (2, 0, 0), (0, 2, 0), (0, 0, 2)))
    assert G.torus_rank == 0 and G.components.order == 8


def test_restriction_bd_to_b():
    T = triangle_fine()
    bd, b = _simplex(T, (2, 0), (1, 1)), _simplex(T, (2, 0))
    G = fiber_group(T, bd)
    assert G.components.order == 2
    R = restriction_map(T, bd, b)
    half = G.component_of((Fraction(1, 2), Fraction(1, 2)))
    assert half != G.component_of((0, 0))
    H = fiber_group(T, b)
    assert R(half) == H.component_of((Fraction(1, 2), 0)) != H.component_of((0, 0))


def test_restriction_trivial_target_and_identity():
    T = twodex()
    e = T.boundary_facets[0]
    R = restriction_map(T, e, e[:1])
    assert set(R.images) == {0}
    T2 = quadric_coarse()
    f = T2.boundary_facets[0]
    assert restriction_map(T2, f, f).images == tuple(range(8))


def test_restriction_is_a_homomorphism():
    T = quadric_coarse()
    f = T.boundary_facets[0]
    G, H = fiber_group(T, f), fiber_group(T, f[:2])
    R = restriction_map(T, f, f[:2])
    for i, a in enumerate(G.coset_reps):
        for j, b in enumerate(G.coset_reps):
            k = G.component_of(tuple(x + y for x, y in zip(a, b)))
            assert R(k) == H.component_of(tuple(x + y for x, y in zip(H.coset_reps[R(i)], H.coset_reps[R(j)])))


def test_functoriality():
    T = quadric_coarse()
    f = T.boundary_facets[0]
    e, v = f[:2], f[:1]
    fe, ev, fv = restriction_map(T, f, e), restriction_map(T, e, v), restriction_map(T, f, v)
    assert all(ev(fe(i)) == fv(i) for i in range(8))


def test_rejects_bad_simplices():
    T = triangle_fine()
    with pytest.raises(SimplexContainsOrigin):
        fiber_group(T, (T.index[O2], T.index[(2, 0)]))
    with pytest.raises(NotAFace):
        fiber_group(T, _simplex(T, (2, 0), (0, 2)))
    with pytest.raises(NotAFace):
        restriction_map(T, _simplex(T, (2, 0)), _simplex(T, (1, 1)))


def test_quotient_vertex_b():
    T = triangle_fine()
    Q = quotient_fiber_group(T, _simplex(T, (2, 0)), orthant(2))
    assert Q.basis.tolist() == [[1, 0]]
    assert Q.components.order == 2 and Q.torus_rank == 0


def test_quotient_interior_is_plain():
    T = triangle_fine()
    s = _simplex(T, (1, 1))
    Q = quotient_fiber_group(T, s, orthant(2))
    G = fiber_group(T, s)
    assert Q.torus_rank == G.torus_rank and Q.components == G.components


def test_quotient_quadric_edge():
    T = quadric_coarse()
    Q = quotient_fiber_group(T, _simplex(T, (2, 0, 0), (0, 2, 0)), orthant(3))
    assert Q.basis.rows == 2
    assert Q.components.invariant_factors == (2, 2) and Q.torus_rank == 0
