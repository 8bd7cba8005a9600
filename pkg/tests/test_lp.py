from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from skelet.lp import solve_lp, verify_farkas


def test_optimum():
    # maximize x + y with x + 2y + s = 4, 3x + y + t = 6
    res = solve_lp([[1, 2, 1, 0], [3, 1, 0, 1]], [4, 6], [1, 1, 0, 0])
    assert res.status == "optimal"
    assert res.value == Fraction(14, 5)


def test_infeasible_with_certificate():
    A = [[1, 1], [1, 1]]
    b = [1, 2]
    res = solve_lp(A, b)
    assert res.status == "infeasible"
    assert verify_farkas(A, b, res.farkas)


def test_unbounded():
    res = solve_lp([[1, -1]], [0], [1, 0])
    assert res.status == "unbounded"


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=3),
       st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_feasible_or_certified(A, b):
    b = b[:len(A)]
    res = solve_lp(A, b)
    if res.status == "infeasible":
        assert verify_farkas(A, b, res.farkas)
    else:
        x = res.x
        assert all(v >= 0 for v in x)
        assert all(sum(a * v for a, v in zip(row, x)) == rhs for row, rhs in zip(A, b))
