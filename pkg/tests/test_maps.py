import pytest

from skelet.errors import NonCellularIdentification
from skelet.homology import homology
from skelet.maps import cellularize_map, quotient_by_cellular_map
from skelet.torus import torus_arrangement


def test_projection_torus_to_circle():
    S2, T2, m = cellularize_map(torus_arrangement(2), torus_arrangement(1), [[1, 0]])
    assert m.verify()
    by_dim = {}
    for i, c in enumerate(S2.cells):
        by_dim.setdefault(c.dim, []).append(m.degrees[i])
    # the vertical edge and the square collapse, the horizontal edge maps with degree one
    assert sorted(by_dim[1]) == [0, 1] and by_dim[2] == [0]


def test_identity_map():
    S = torus_arrangement(2, [((1, 1), 0)])
    S2, T2, m = cellularize_map(S, S, [[1, 0], [0, 1]])
    assert S2.counts() == S.counts() == T2.counts()
    assert m.verify()
    assert all(abs(d) == 1 for d in m.degrees)
    assert quotient_by_cellular_map(m).counts() == S.counts()


def test_source_refined_by_pullback():
    S2, T2, m = cellularize_map(torus_arrangement(2, [((1, 1), 0)]), torus_arrangement(1), [[1, 0]])
    assert S2.counts() == (1, 3, 2) and T2.counts() == (1, 1)
    assert m.verify()


def test_collapse_torus_to_circle():
    S2, T2, m = cellularize_map(torus_arrangement(2), torus_arrangement(1), [[1, 0]])
    assert homology(quotient_by_cellular_map(m)).betti == (1, 1)


def test_collapse_cylinder_like_fiber():
    S2, T2, m = cellularize_map(torus_arrangement(2, [((2, 0), 0)]), torus_arrangement(1), [[0, 1]])
    assert homology(quotient_by_cellular_map(m)).betti == (1, 1)


def test_covering_map_is_not_a_quotient():
    S2, T2, m = cellularize_map(torus_arrangement(1), torus_arrangement(1), [[2]])
    assert m.verify()
    with pytest.raises(NonCellularIdentification):
        quotient_by_cellular_map(m)
