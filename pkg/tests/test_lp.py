from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from jetbound import lp


def test_empty_system_feasible():
    res = lp.solve_feasibility([], [], [], [], 3)
    assert res.feasible and res.x == (0, 0, 0)


def test_simple_feasible():
    # x + y = 2, x - y >= 1, y >= -5
    a_eq, b_eq = [[1, 1]], [2]
    a_ge, b_ge = [[1, -1], [0, 1]], [1, -5]
    res = lp.solve_feasibility(a_eq, b_eq, a_ge, b_ge, 2)
    assert res.feasible and lp.check_feasible(a_eq, b_eq, a_ge, b_ge, res.x)


def test_simple_infeasible():
    # x >= 1 and -x >= 0
    a_ge, b_ge = [[1], [-1]], [1, 0]
    res = lp.solve_feasibility([], [], a_ge, b_ge, 1)
    assert not res.feasible
    assert lp.check_farkas([], [], a_ge, b_ge, res.farkas, 1)
    assert res.farkas.y_ge == (1, 1)


def test_inconsistent_equalities():
    a_eq, b_eq = [[1, 1], [2, 2]], [1, 3]
    res = lp.solve_feasibility(a_eq, b_eq, [], [], 2)
    assert not res.feasible
    assert lp.check_farkas(a_eq, b_eq, [], [], res.farkas, 2)


def test_negative_solution_needed():
    a_eq, b_eq = [[1, 0], [0, 1]], [-3, Fraction(-1, 2)]
    res = lp.solve_feasibility(a_eq, b_eq, [], [], 2)
    assert res.feasible and res.x == (-3, Fraction(-1, 2))


def test_checker_rejects_bad_certificates():
    a_ge, b_ge = [[1], [-1]], [1, 0]
    assert not lp.check_farkas([], [], a_ge, b_ge, lp.Farkas((), (1, 0)), 1)
    assert not lp.check_farkas([], [], a_ge, b_ge, lp.Farkas((), (-1, -1)), 1)
    assert not lp.check_farkas([], [], [[1], [-1]], [0, 0], lp.Farkas((), (1, 1)), 1)


def test_degenerate_cycling_candidate():
    # a classic degenerate system; Bland's rule must terminate
    a_ge = [
        [Fraction(-1, 4), 8, 1, -9],
        [Fraction(-1, 2), 12, Fraction(1, 2), -3],
        [0, 0, -1, 0],
        [1, 0, 0, 0],
        [0, 1, 0, 0],
        [0, 0, 1, 0],
        [0, 0, 0, 1],
    ]
    b_ge = [0, 0, -1, 0, 0, 0, 0]
    res = lp.solve_feasibility([], [], a_ge, b_ge, 4)
    assert res.feasible and lp.check_feasible([], [], a_ge, b_ge, res.x)


coef = st.integers(-3, 3)


@settings(max_examples=150, deadline=None)
@given(
    st.integers(1, 3).flatmap(
        lambda n: st.tuples(
            st.just(n),
            st.lists(st.tuples(st.lists(coef, min_size=n, max_size=n), coef), max_size=2),
            st.lists(st.tuples(st.lists(coef, min_size=n, max_size=n), coef), max_size=5),
        )
    )
)
def test_result_is_always_certified(system):
    # every answer carries its own proof: a feasible point or a Farkas vector
    n, eqs, ges = system
    a_eq, b_eq = [r for r, _ in eqs], [b for _, b in eqs]
    a_ge, b_ge = [r for r, _ in ges], [b for _, b in ges]
    res = lp.solve_feasibility(a_eq, b_eq, a_ge, b_ge, n)
    if res.feasible:
        assert lp.check_feasible(a_eq, b_eq, a_ge, b_ge, res.x)
    else:
        assert lp.check_farkas(a_eq, b_eq, a_ge, b_ge, res.farkas, n)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.sampled_from([-2, -1, 1, 2]), st.integers(-5, 5)), min_size=1, max_size=6))
def test_one_variable_against_interval_oracle(rows):
    # a x >= b for each row; feasible iff max lower bound <= min upper bound
    lo = max((Fraction(b, a) for a, b in rows if a > 0), default=None)
    hi = min((Fraction(b, a) for a, b in rows if a < 0), default=None)
    expect = lo is None or hi is None or lo <= hi
    res = lp.solve_feasibility([], [], [[a] for a, _ in rows], [b for _, b in rows], 1)
    assert res.feasible == expect
