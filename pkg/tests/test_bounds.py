import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jetbound import jets
from jetbound.bounds import (
    RootBound,
    Weights,
    dilate_points,
    max_jet_order,
    multipoint_jet_lower,
    multipoint_seshadri_lower,
    seshadri_lower_bound,
    volume_upper_bound,
)
from jetbound.geometry import LatticePointSet, dilate, hull_to_halfspaces, lattice_points, standard_simplex, unit_cube

from conftest import THIRTEEN


def brute_jet_order(s):
    """Oracle: exact rank of every power-form matrix, no early stopping."""
    s, _ = s.normalized()
    best = -1
    for m in range(len(s)):
        if math.comb(m + s.n, s.n) > len(s):
            break
        if jets.rank_exact(jets.build_jet_matrix(s, jets.phi_of_power(m, s.n))) == math.comb(m + s.n, s.n):
            best = m
    return best


# -- values -----------------------------------------------------------------


def test_weights_and_rootbound():
    w = Weights.of([1, Fraction(1, 2)])
    assert w.norm(2) == Fraction(5, 4)
    assert w.repeated(2).values == (1, Fraction(1, 2), 1, Fraction(1, 2))
    assert (w + Weights.of([3])).values[-1] == 3
    with pytest.raises(ValueError):
        Weights.of([1, 0])
    r = RootBound(Fraction(2), 2)
    assert str(r) == "sqrt(2)" and r.rational_value() is None
    assert r.is_at_least(Fraction(141, 100)) and not r.is_at_least(Fraction(142, 100))
    assert RootBound(Fraction(8, 27), 3).rational_value() == Fraction(2, 3)
    assert RootBound(Fraction(8, 27), 3).equals(Fraction(2, 3))
    assert str(RootBound(Fraction(6), 3)) == "(6)^(1/3)"


def test_max_jet_order_examples(triangle):
    for k in range(6):
        assert max_jet_order(LatticePointSet.of([(i,) for i in range(k + 1)])) == k
    assert max_jet_order(lattice_points(triangle)) == 1
    assert max_jet_order(lattice_points(unit_cube(3))) == 1
    line = LatticePointSet.of([(i, i) for i in range(5)])
    assert max_jet_order(line) == 0
    with pytest.raises(ValueError):
        max_jet_order(LatticePointSet((), 2))


def test_max_jet_order_normalizes():
    s = LatticePointSet.of([(-2, -1), (-1, -1), (-2, 0)])
    assert max_jet_order(s) == 1


def test_volume_upper_bound_examples(triangle, tetrahedron):
    assert volume_upper_bound(triangle, Weights.of([1, 1, 1])).rational_value() == 1
    assert volume_upper_bound(tetrahedron, Weights.of([1, 1])).rational_value() == 1
    for n in (1, 2, 3, 4):
        ub = volume_upper_bound(unit_cube(n), Weights.of([1]))
        assert ub == RootBound(Fraction(math.factorial(n)), n)
    assert str(volume_upper_bound(unit_cube(2), Weights.of([1]))) == "sqrt(2)"


@pytest.mark.parametrize("n", [1, 2, 3])
def test_simplex_exact(n):
    for k in range(1, 6):
        assert max_jet_order(dilate_points(standard_simplex(n), k), certify=True) == k
    res = seshadri_lower_bound(standard_simplex(n), k_budget=3, certify=True)
    assert res.lower == 1 and res.upper.rational_value() == 1 and res.exact
    assert res.k_used == 1 and res.certified


def test_unit_square():
    for budget in (1, 2, 3, 4):
        res = seshadri_lower_bound(unit_cube(2), k_budget=budget)
        assert res.lower == 1
        assert res.upper == RootBound(Fraction(2), 2)
        assert res.sandwich_holds() and not res.exact
    for k in range(1, 5):
        assert brute_jet_order(dilate_points(unit_cube(2), k)) == k


def test_degenerate_segment():
    res = seshadri_lower_bound(hull_to_halfspaces([(0, 0), (2, 1)]))
    assert res.lower == 0 and res.method == "degenerate"


def test_seshadri_bound_validates_budget(triangle):
    with pytest.raises(ValueError):
        seshadri_lower_bound(triangle, k_budget=0)


def test_workers_match_sequential(triangle):
    a = seshadri_lower_bound(triangle, k_budget=3)
    b = seshadri_lower_bound(triangle, k_budget=3, workers=2)
    assert (a.lower, a.k_used, a.m_achieved) == (b.lower, b.k_used, b.m_achieved)


# -- several points ---------------------------------------------------------


def test_thirteen_points_multipoint(thirteen):
    res = multipoint_jet_lower(thirteen, Weights.of([3, 1]))
    assert res.t >= 1 and res.one_sided
    assert res.jets == (3, 1)


def test_multipoint_r1_agrees_with_max_jet_order(triangle):
    for s in [LatticePointSet.of(THIRTEEN), lattice_points(triangle), dilate_points(triangle, 2), dilate_points(unit_cube(2), 2)]:
        res = multipoint_jet_lower(s, Weights.of([1]), points=[(1,) * s.n])
        assert res.t == max_jet_order(s)


def test_multipoint_single_weight_matches_one_point(triangle):
    for delta in (triangle, unit_cube(2), standard_simplex(2)):
        a = multipoint_seshadri_lower(delta, Weights.of([1]), k_budget=3)
        b = seshadri_lower_bound(delta, k_budget=3)
        assert a.lower == b.lower


def test_tetrahedron_two_points_counting_cap(tetrahedron):
    # (k,k)-jets at two points need 2*C(k+3,3) conditions; k*Delta has fewer points for k<=3
    for k in (1, 2, 3):
        npts = len(dilate_points(tetrahedron, k))
        assert npts < 2 * math.comb(k + 3, 3)
        assert npts >= 2 * math.comb(k + 2, 3)
    res = multipoint_seshadri_lower(tetrahedron, Weights.of([1, 1]), k_budget=3)
    assert res.lower == Fraction(2, 3)
    assert res.upper.rational_value() == 1
    assert res.sandwich_holds()
    assert res.notes


def test_multipoint_scaling(thirteen):
    base = multipoint_jet_lower(thirteen, Weights.of([3, 1]))
    for t in (Fraction(1, 2), Fraction(2), Fraction(3)):
        scaled = multipoint_jet_lower(thirteen, Weights.of([3, 1]).scaled(t))
        assert scaled.t == base.t / t
        assert scaled.jets == base.jets


def test_multipoint_unit_square():
    res = multipoint_seshadri_lower(unit_cube(2), Weights.of([1, 1]), k_budget=4)
    assert res.lower >= Fraction(1, 2) and res.sandwich_holds()


def test_multipoint_fixed_points_rejects_mismatch(thirteen):
    with pytest.raises(ValueError):
        multipoint_jet_lower(thirteen, Weights.of([1, 1]), points=[(1, 1)])


# -- properties -------------------------------------------------------------

small_point = st.tuples(st.integers(0, 4), st.integers(0, 4))


@settings(max_examples=30, deadline=None)
@given(st.lists(small_point, min_size=1, max_size=10, unique=True))
def test_max_jet_order_matches_oracle(pts):
    s = LatticePointSet.of(pts)
    assert max_jet_order(s) == brute_jet_order(s)


@settings(max_examples=30, deadline=None)
@given(
    st.lists(small_point, min_size=1, max_size=6, unique=True),
    st.lists(small_point, min_size=1, max_size=6, unique=True),
)
def test_minkowski_superadditivity(a, b):
    s, t = LatticePointSet.of(a), LatticePointSet.of(b)
    assert max_jet_order(s.minkowski(t)) >= max_jet_order(s) + max_jet_order(t)


@settings(max_examples=15, deadline=None)
@given(st.lists(small_point, min_size=3, max_size=5, unique=True), st.integers(1, 3))
def test_sandwich(pts, budget):
    p = hull_to_halfspaces(pts)
    res = seshadri_lower_bound(p, k_budget=budget)
    assert res.sandwich_holds()
    assert res.lower >= 0


@settings(max_examples=10, deadline=None)
@given(st.lists(small_point, min_size=3, max_size=5, unique=True))
def test_lower_bound_monotone_in_budget(pts):
    p = hull_to_halfspaces(pts)
    a = seshadri_lower_bound(p, k_budget=1).lower
    b = seshadri_lower_bound(p, k_budget=3).lower
    assert b >= a


@settings(max_examples=8, deadline=None)
@given(st.lists(small_point, min_size=3, max_size=4, unique=True))
def test_dilation_homogeneity(pts):
    p = hull_to_halfspaces(pts)
    if p.dim < 2:
        return
    # j(k (2P)) = j((2k) P), so budget 2 on 2P sees the same cells as budget 4 on P at even k
    a = seshadri_lower_bound(dilate(p, 2), k_budget=2).lower
    b = max(Fraction(max_jet_order(dilate_points(p, k)), k) for k in (2, 4))
    assert a == 2 * b


def test_seed_changes_nothing_when_full(thirteen):
    rng = random.Random(0)
    outs = {multipoint_jet_lower(thirteen, Weights.of([3, 1]), seed=rng.randrange(10**6)).t for _ in range(3)}
    assert min(outs) >= 1
