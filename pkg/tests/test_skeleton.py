from corpus import TETRA, tetrahedron, orthant, quadric_coarse, quadric_midpoint, triangle_coarse, triangle_fine, twodex
from skelet.homology import homology
from skelet.polytope import LatticePolytope, normalized_volume
from skelet.skeleton import build_hatted, build_quotient_skeleton, build_skeleton, euler_census
from skelet.triangulation import StarTriangulation


def _b(model):
    return homology(model.complex).betti


def test_unimodular_hatted_is_boundary():
    T = twodex()
    H = build_hatted(T)
    assert H.complex.counts() == (3, 3)
    assert _b(H) == (1, 1)


def test_quadric_hatted_census():
    H = build_hatted(quadric_coarse())
    assert H.complex.counts() == (6, 12, 8)
    assert _b(H) == (1, 0, 1)
    assert euler_census(quadric_coarse(), "hatted") == 2


def test_skeleton_examples():
    assert _b(build_skeleton(twodex())) == (1, 4)
    assert _b(build_skeleton(triangle_fine())) == (1, 5)
    assert _b(build_skeleton(triangle_coarse())) == (1, 5)


def test_segment_skeleton():
    seg = LatticePolytope([(-1,), (1,)])
    T = StarTriangulation(seg, [[(-1,), (0,)], [(0,), (1,)]])
    assert _b(build_skeleton(T)) == (2,)


def test_quotient_examples():
    assert _b(build_quotient_skeleton(triangle_fine(), orthant(2))) == (1, 1)
    assert _b(build_quotient_skeleton(triangle_coarse(), orthant(2))) == (1, 1)
    assert _b(build_quotient_skeleton(quadric_coarse(), orthant(3))) == (1, 0, 1)
    assert _b(build_quotient_skeleton(quadric_midpoint(), orthant(3))) == (1, 0, 1)


def test_quotient_map_is_a_chain_map():
    Q = build_quotient_skeleton(triangle_fine(), orthant(2))
    assert Q.quotient_map.verify()
    assert Q.rounds >= 0


def test_euler_census():
    assert euler_census(twodex(), "skeleton") == -3
    assert euler_census(tetrahedron(), "skeleton") == 4 == normalized_volume(LatticePolytope(TETRA))
    S = build_skeleton(tetrahedron())
    assert S.complex.euler_characteristic() == 4

