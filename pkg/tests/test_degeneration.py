from fractions import Fraction

import pytest

from corpus import QUADRIC, quadric_coarse, triangle_coarse, triangle_fine, twodex
from skelet.degeneration import classify_divisors, overgraph_cone, restrict_polynomial
from skelet.errors import CertificateMismatch, SignConditionViolated, SupportMismatch
from skelet.polytope import LatticePolytope
from skelet.triangulation import StarTriangulation

H27 = {(1, 0): 1, (0, 1): 1, (1, 1): 1}


def test_overgraph_relation_ac_dt():
    G = overgraph_cone(triangle_fine(), H27)
    a, c, d, t = (1, 0, 1), (0, 1, 1), (1, 1, 1), (0, 0, 1)
    assert all(G.contains(v) for v in (a, c, d, t))
    assert [x + y for x, y in zip(a, c)] == [x + y for x, y in zip(d, t)]
    assert not any(G.contains(v) for v in ((1, 0, 0), (0, 1, 0), (1, 1, 0)))
    assert G.height((2, 0)) == 2 and G.height((1, 1)) == 1


def test_twodex_facets():
    G = overgraph_cone(twodex(), {(1, 0): 1, (0, 1): 1, (-1, -1): 1})
    assert len(G.facets) == 3
    assert sum(not f.contains_t for f in G.facets) == 3


def test_coarse_linear_heights():
    G = overgraph_cone(triangle_coarse(), {(2, 0): 1, (0, 2): 1})
    D = classify_divisors(G, triangle_coarse())
    assert len(D.vertical) == 1


def test_example_divisors():
    T = triangle_fine()
    D = classify_divisors(overgraph_cone(T, H27), T)
    assert D.vertical == (((0, 2), (1, 1)), ((1, 1), (2, 0)))
    assert set(D.horizontal) == {((2, 0),), ((0, 2),)}
    D2 = classify_divisors(overgraph_cone(T, T.regularity), T)
    assert D2.vertical == D.vertical and D2.horizontal == D.horizontal


def test_twodex_divisors():
    T = twodex()
    D = classify_divisors(overgraph_cone(T, T.regularity), T)
    assert (len(D.vertical), len(D.horizontal)) == (3, 0)


def test_segment_divisors():
    T = StarTriangulation(LatticePolytope([(0,), (2,)]), [[(0,), (2,)]])
    D = classify_divisors(overgraph_cone(T, T.regularity), T)
    assert D.vertical == (((2,),),) and len(D.horizontal) == 1


def test_non_convex_heights_rejected():
    with pytest.raises(CertificateMismatch):
        overgraph_cone(triangle_fine(), {(1, 0): 1, (0, 1): 1, (1, 1): 2})


def test_restrict_polynomial():
    T = triangle_fine()
    f = {(0, 0): -1, (2, 0): 1, (1, 1): 1, (0, 2): 1}
    R = restrict_polynomial(f, T, [(2, 0), (1, 1)])
    assert R.constant == -1
    assert R.terms == (((1, 1), 1), ((2, 0), 1))
    assert R.evaluate((1, 1)) == 1
    assert R.evaluate((1, 1), homogeneous=True) == 2
    V = restrict_polynomial(f, T, [(0, 2)])
    assert len(V.terms) == 1


def test_restrict_full_quadric_facet():
    T = quadric_coarse()
    f = {p: 1 for p in QUADRIC[1:]} | {(0, 0, 0): Fraction(-1, 2)}
    R = restrict_polynomial(f, T, QUADRIC[1:])
    assert len(R.ell) == 3


def test_restrict_polynomial_errors():
    T = triangle_fine()
    with pytest.raises(SignConditionViolated):
        restrict_polynomial({(0, 0): 1, (2, 0): 1, (1, 1): 1, (0, 2): 1}, T, [(2, 0)])
    with pytest.raises(SignConditionViolated):
        restrict_polynomial({(0, 0): -1, (2, 0): -1, (1, 1): 1, (0, 2): 1}, T, [(2, 0)])
    with pytest.raises(SupportMismatch):
        restrict_polynomial({(0, 0): -1, (2, 0): 1, (0, 2): 1}, T, [(2, 0)])
    with pytest.raises(SupportMismatch):
        restrict_polynomial({(0, 0): -1, (2, 0): 1, (1, 1): 1, (0, 2): 1}, T, [(2, 0), (0, 2)])
