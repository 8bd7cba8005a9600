from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import random

from corpus import (TETRA, O2, O3, QUADRIC, TRIANGLE, tetrahedron, pinwheel, quadric_coarse, random_polytope,
                    random_triangulation, triangle_coarse, twodex)
from skelet.errors import GapOrOverlap, OriginMissing
from skelet.polytope import LatticePolytope, normalized_volume
from skelet.triangulation import (
    FarkasWitness,
    HeightCertificate,
    StarTriangulation,
    carrier_simplex,
    check_regularity,
    generate_star_triangulation,
    validate_triangulation,
    verify_certificate,
)


def test_tetrahedron_valid():
    T = StarTriangulation(LatticePolytope(TETRA),
                          [[O3] + [v for v in TETRA if v != w] for w in TETRA])
    rep = validate_triangulation(T)
    assert rep.volume == 4 and rep.origin_interior
    assert T.maximal == tetrahedron().maximal


def test_quadric_valid():
    assert validate_triangulation(quadric_coarse()).boundary_simplices == 1


def test_overlap_rejected():
    P = LatticePolytope(TRIANGLE)
    T = StarTriangulation(P, [[O2, (2, 0), (0, 2)], [O2, (2, 0), (1, 1)]])
    with pytest.raises(GapOrOverlap):
        validate_triangulation(T)


def test_gap_rejected():
    P = LatticePolytope(TRIANGLE)
    with pytest.raises(GapOrOverlap):
        validate_triangulation(StarTriangulation(P, [[O2, (2, 0), (1, 1)]]))


def test_origin_missing():
    with pytest.raises(OriginMissing):
        StarTriangulation(LatticePolytope([(1, 0), (0, 1), (1, 1)]), [[(1, 0), (0, 1), (1, 1)]])


def test_twodex_regular():
    cert = check_regularity(twodex())
    assert isinstance(cert, HeightCertificate)
    assert verify_certificate(twodex(), cert)


def test_coarse_regular_with_linear_heights():
    T = triangle_coarse()
    cert = check_regularity(T)
    assert isinstance(cert, HeightCertificate)
    assert verify_certificate(T, cert)


def test_pinwheel_nonregular():
    w = check_regularity(pinwheel())
    assert isinstance(w, FarkasWitness)
    assert w.verify()
    assert not pinwheel().is_regular


def test_tampered_witness_fails():
    w = check_regularity(pinwheel())
    bad = FarkasWitness(w.variables, w.constraints, tuple(-m for m in w.multipliers))
    assert not bad.verify()


def test_generate_quadric_flat_heights():
    T = generate_star_triangulation(LatticePolytope(QUADRIC), {p: 0 for p in QUADRIC[1:]})
    assert T.maximal == quadric_coarse().maximal


def test_generate_quadric_midpoints():
    mids = [(1, 1, 0), (1, 0, 1), (0, 1, 1)]
    h = {p: 2 for p in QUADRIC[1:]} | {p: 1 for p in mids}
    T = generate_star_triangulation(LatticePolytope(QUADRIC), h, points=mids)
    assert len(T.boundary_facets) == 4
    assert tuple(sorted(T.index[m] for m in mids)) in set(T.boundary_facets)


def test_generate_example_fine():
    T = generate_star_triangulation(LatticePolytope(TRIANGLE), points=[(1, 1), (1, 0), (0, 1)])
    got = {tuple(T.coords(s)) for s in T.boundary_facets}
    assert got == {((1, 1), (2, 0)), ((0, 2), (1, 1))}


def test_carrier_simplex():
    T = twodex()
    assert T.coords(carrier_simplex(T, (1, 0))) == [(1, 0)]
    assert T.coords(carrier_simplex(T, (Fraction(1, 2), Fraction(1, 2)))) == [(0, 1), (1, 0)]


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([2, 3]))
def test_regularity_round_trip(seed, rank):
    rng = random.Random(seed)
    P = random_polytope(rng, rank)
    T = random_triangulation(rng, P)
    rep = validate_triangulation(T)
    assert rep.volume == normalized_volume(P)
    cert = check_regularity(T)
    assert isinstance(cert, HeightCertificate) and verify_certificate(T, cert)
    regen = generate_star_triangulation(P, {p: Fraction(v) for p, v in cert.values if any(p)},
                                        points=[p for p in T.points if any(p)], perturb=False)
    assert regen.maximal == T.maximal
