import math

import numpy as np
import pytest
import scipy.special
from hypothesis import given
from hypothesis import strategies as st

from remezspan import (PointSet, VitushkinModel, beta_spread, beta_weight, corollary_5_bound,
                       eta, make_grid_1d, make_grid_nd, mst, omega_min_distance_bound,
                       omega_positive, sandwich_check, theorem_35_check, zeta)
from remezspan.errors import (DivergentError, InsufficientPointsError, InvalidParameterError,
                              NotApplicableError, TooLargeError)
from remezspan.spread import distance_matrix, farthest_order, prefix_mst_weights

from conftest import random_set
from oracles import dispersion_brute, linf, spanning_trees, spread_brute


# -- spanning trees ---------------------------------------------------------------------------

def test_unit_square_corners():
    Z = PointSet([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    T = mst(Z)
    assert len(T.edges) == 3 and T.weight == pytest.approx(3.0)
    assert mst(Z, metric="euclidean").weight == pytest.approx(3.0)
    with pytest.raises(InsufficientPointsError):
        mst(PointSet([[0.0, 0.0]]))


@given(st.integers(2, 6), st.integers(1, 3), st.integers(0, 10**6))
def test_mst_matches_enumeration(p, n, seed):
    Z = random_set(np.random.default_rng(seed), p, n)
    pts = Z.points
    brute = min(sum(linf(pts[i], pts[j]) for i, j in t) for t in spanning_trees(p))
    assert mst(Z).weight == pytest.approx(brute, rel=1e-12)


@given(st.integers(2, 6), st.floats(0.2, 4.0), st.integers(0, 10**6))
def test_reweighting_invariance(p, beta, seed):
    # t -> t^beta is increasing, so the MST for weights d^beta is the same tree
    Z = random_set(np.random.default_rng(seed), p, 2)
    pts = Z.points
    brute = min(sum(linf(pts[i], pts[j]) ** beta for i, j in t) for t in spanning_trees(p))
    assert beta_weight(mst(Z), beta) == pytest.approx(brute, rel=1e-12)


@given(st.integers(3, 30), st.floats(0.5, 3.0), st.integers(0, 10**6))
def test_prefix_weights_match_direct(m, beta, seed):
    Z = random_set(np.random.default_rng(seed), m, 2)
    D = distance_matrix(Z.points)
    order, _ = farthest_order(D)
    inc = prefix_mst_weights(D, order, beta)
    for k in (2, max(2, m // 2), m):
        sub = PointSet(Z.points[order[:k]])
        assert inc[k - 1] == pytest.approx(beta_weight(mst(sub), beta), rel=1e-12)


# -- dispersion -----------------------------------------------------------------------------

def test_eta_grid_examples():
    G = make_grid_1d(5)
    assert eta(G, 2) == (2.0, 2.0)
    assert eta(G, 3) == (1.0, 1.0)
    assert eta(G, 5) == (0.5, 0.5)
    with pytest.raises(InvalidParameterError):
        eta(G, 1)
    with pytest.raises(TooLargeError):
        eta(make_grid_1d(30), 3, mode="exact")


@given(st.integers(2, 9), st.integers(1, 2), st.integers(0, 10**6), st.data())
def test_eta_exact_matches_brute(m, n, seed, data):
    Z = random_set(np.random.default_rng(seed), m, n)
    p = data.draw(st.integers(2, m))
    lo, hi = eta(Z, p, mode="exact")
    assert lo == hi == pytest.approx(dispersion_brute(Z.points, p), rel=1e-15)


@given(st.integers(3, 14), st.integers(0, 10**6))
def test_greedy_brackets_and_monotone(m, seed):
    Z = random_set(np.random.default_rng(seed), m, 2)
    prev = math.inf
    for p in range(2, m + 1):
        lo, hi = eta(Z, p, mode="greedy")
        true = dispersion_brute(Z.points, p) if m <= 9 else None
        if true is not None:
            assert lo <= true + 1e-15 and true <= hi + 1e-15
        assert lo <= prev + 1e-15
        prev = lo


# -- beta-spread ----------------------------------------------------------------------------

def test_spread_examples():
    G = make_grid_1d(5)
    rep = beta_spread(G, 1.0)
    # in one dimension every subset's MST weight is its diameter
    assert rep.v_lo == rep.v_hi == pytest.approx(2.0)
    assert rep.rho_full == pytest.approx(2.0)
    two = beta_spread(G, 2.0)
    assert two.v_lo == pytest.approx(4.0)
    assert beta_spread(PointSet([[0.3]]), 1.0).v_lo == 0.0
    with pytest.raises(InvalidParameterError):
        beta_spread(G, 0.0)
    with pytest.raises(TooLargeError):
        beta_spread(make_grid_1d(20), 1.0, mode="exact")


@given(st.integers(2, 7), st.integers(1, 2), st.floats(0.5, 2.5), st.integers(0, 10**6))
def test_spread_matches_brute(m, n, beta, seed):
    Z = random_set(np.random.default_rng(seed), m, n)
    assert beta_spread(Z, beta, mode="exact").v_lo == pytest.approx(spread_brute(Z.points, beta),
                                                                     rel=1e-12)


@given(st.integers(2, 12), st.floats(0.5, 2.5), st.integers(0, 10**6))
def test_heuristic_within_exact(m, beta, seed):
    Z = random_set(np.random.default_rng(seed), m, 2)
    ex = beta_spread(Z, beta, mode="exact")
    he = beta_spread(Z, beta, mode="heuristic")
    assert he.v_lo <= ex.v_lo * (1 + 1e-12)
    assert he.v_lo >= ex.rho_full * (1 - 1e-12)


def test_sandwich_grid():
    ok, lower, v, upper = sandwich_check(make_grid_1d(5), 1.5)
    assert ok and lower <= v <= upper


@given(st.integers(2, 10), st.integers(1, 2), st.floats(0.5, 2.0), st.integers(0, 10**6))
def test_sandwich_random(m, n, beta, seed):
    Z = random_set(np.random.default_rng(seed), m, n)
    assert sandwich_check(Z, beta)[0]


def test_eta_csv():
    text = beta_spread(make_grid_1d(4), 1.0).eta_csv()
    assert text.splitlines()[0] == "p,eta_lo,eta_hi"
    assert len(text.splitlines()) == 4


# -- zeta -------------------------------------------------------------------------------------

@pytest.mark.parametrize("x", [1.05, 1.5, 2.0, 3.0, 4.0, 10.0])
def test_zeta_against_scipy(x):
    assert zeta(x) == pytest.approx(float(scipy.special.zeta(x)), abs=1e-9)


def test_zeta_closed_forms():
    assert zeta(2.0) == pytest.approx(math.pi ** 2 / 6, rel=1e-12)
    assert zeta(4.0) == pytest.approx(math.pi ** 4 / 90, rel=1e-12)
    for x in (1.0, 0.5, -2.0):
        with pytest.raises(DivergentError):
            zeta(x)


# -- positivity criterion ------------------------------------------------------------------

def test_criterion_needs_two_dimensions():
    with pytest.raises(NotApplicableError):
        theorem_35_check(make_grid_1d(11), 3, 1.0)
    with pytest.raises(InvalidParameterError):
        theorem_35_check(make_grid_nd(2, 5), 1, 0.5)


def test_criterion_inconclusive_on_grid():
    v = theorem_35_check(make_grid_nd(2, 41), 1, 1.5)
    assert v.verdict == "inconclusive"
    assert v.threshold == pytest.approx(27.0 * float(scipy.special.zeta(1.5)), rel=1e-9)
    # the grid does have positive span; the criterion is only sufficient
    assert omega_positive(make_grid_nd(2, 41), 1)[0]


def test_criterion_positive_implies_span():
    G = make_grid_nd(2, 21)
    model = VitushkinModel(2, 1, (1.0, 0.5))
    v = theorem_35_check(G, 1, 2.0, model=model)
    assert v.positive and v.cprime == 1.5
    assert v.threshold == pytest.approx(1.5 ** 2 * math.pi ** 2 / 6, rel=1e-12)
    assert omega_positive(G, 1, model)[0]
    assert theorem_35_check(G, 1, 2.0, cprime=1.5).positive


# -- dispersion bound on the span ----------------------------------------------------------------

def test_dispersion_bound_full_size_is_min_distance_bound():
    G = make_grid_1d(11)
    assert corollary_5_bound(G, 3, 11) == pytest.approx(omega_min_distance_bound(G, 3), rel=1e-12)
    assert corollary_5_bound(G, 3, 2) == pytest.approx(0.0)  # 2 * (2 - 3) clamps to 0
    assert corollary_5_bound(make_grid_nd(2, 11), 1, 121) == pytest.approx(3.2, rel=1e-12)
    simple = corollary_5_bound(make_grid_nd(2, 11), 1, 121, simplified=True)
    assert simple == pytest.approx(0.04 * (121 - 9 / 0.2), rel=1e-12)
