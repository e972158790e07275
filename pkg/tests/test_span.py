import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from remezspan import (AnalyticBoundInput, PointSet, VitushkinModel, epsilon1, make_grid_1d,
                       make_grid_nd, make_power_set, omega, omega_1d, omega_min_distance_bound,
                       omega_nd, omega_positive, theorem_31_bound, theorem_32_bound,
                       theorem_33_bound, vitushkin_eval)
from remezspan.covering import cover_table, covering_bounds_nd
from remezspan.errors import InvalidParameterError, NotApplicableError
from remezspan.span import (hypersurface_bound, load_constants_table, model_for, span_curve,
                            span_curve_csv)

from conftest import random_set
from oracles import omega_1d_brute


# -- Vitushkin model ------------------------------------------------------------------

def test_vitushkin_values():
    assert vitushkin_eval(VitushkinModel.builtin(1, 5), 0.37) == 5
    assert vitushkin_eval(VitushkinModel.builtin(2, 3), 0.1) == pytest.approx(265, rel=1e-15)
    assert vitushkin_eval(VitushkinModel.builtin(2, 1), 1.0) == 9
    with pytest.raises(InvalidParameterError):
        vitushkin_eval(VitushkinModel.builtin(2, 1), 0.0)


def test_model_coefficients():
    assert VitushkinModel.builtin(1, 4).coeffs == (4.0,)
    assert VitushkinModel.builtin(2, 3).coeffs == (25.0, 24.0)
    with pytest.raises(NotApplicableError):
        VitushkinModel.builtin(3, 2)
    m = VitushkinModel.from_table(3, 2, {3: [1.0, 2.0, 3.0]})
    # C_i = C'_i (2d)^(n - i)
    assert m.coeffs == (64.0, 32.0, 12.0)
    assert m.cprime == 108.0


def test_constants_table_file(tmp_path):
    f = tmp_path / "c.json"
    f.write_text(json.dumps({"3": [0.5, 1.0, 2.0]}))
    table = load_constants_table(f)
    m = model_for(3, 1, table)
    assert m.coeffs == (4.0, 4.0, 4.0)
    assert model_for(2, 1, table).coeffs == (1.0, 8.0)


@given(st.integers(1, 4), st.integers(1, 6),
       st.lists(st.floats(0.0, 50.0), min_size=4, max_size=4), st.floats(1e-3, 10.0),
       st.floats(1e-3, 10.0))
def test_model_nonincreasing(n, d, raw, e1, e2):
    coeffs = tuple([1.0 + raw[0]] + raw[1:n])
    m = VitushkinModel(n, d, coeffs)
    a, b = sorted((e1, e2))
    assert vitushkin_eval(m, a) >= vitushkin_eval(m, b)


# -- omega in 1D ------------------------------------------------------------------------

def test_grid_example():
    res = omega_1d(make_grid_1d(11), 3)
    assert res.omega_lo == pytest.approx(1.6, abs=1e-12)
    assert res.witness_eps == pytest.approx(0.2, abs=1e-15)
    assert res.attained is False
    assert res.mode == "exact" and res.omega_lo == res.omega_hi


@pytest.mark.parametrize("m,d", [(1, 1), (2, 2), (3, 5), (4, 4)])
def test_small_sets_zero(m, d):
    Z = PointSet(np.linspace(-0.9, 0.7, m)[:, None])
    assert omega_1d(Z, d).omega_lo == 0.0
    assert omega_positive(Z, d) == (False, None)


def test_power_set_value():
    # two-interval cover argument: points 1, then [1/K, 1/2]; the span sits on it
    Z = make_power_set(1, 200)
    assert omega_1d(Z, 2).omega_lo == pytest.approx(0.5 - 1 / 200, abs=1e-12)


@given(st.integers(1, 12), st.integers(1, 5), st.integers(0, 10**6))
def test_omega_1d_matches_brute(m, d, seed):
    Z = random_set(np.random.default_rng(seed), m, 1)
    assert omega_1d(Z, d).omega_lo == pytest.approx(omega_1d_brute(Z.points[:, 0], d), abs=1e-10)


@given(st.integers(2, 14), st.integers(0, 10**6))
def test_monotone_in_d(m, seed):
    Z = random_set(np.random.default_rng(seed), m, 1)
    vals = [omega_1d(Z, d).omega_lo for d in range(1, 7)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))


@given(st.integers(2, 12), st.integers(1, 6), st.integers(1, 4), st.integers(0, 10**6))
def test_monotone_in_set(m, extra, d, seed):
    big = random_set(np.random.default_rng(seed), m + extra, 1)
    small = big.subset(np.arange(m))
    assert omega_1d(small, d).omega_lo <= omega_1d(big, d).omega_lo + 1e-15


def test_volume_domination_grids():
    vals = [omega_1d(make_grid_1d(s), 3).omega_lo for s in (11, 21, 41)]
    assert vals[0] < vals[1] < vals[2] < 2.0
    assert 2.0 - vals[2] == pytest.approx(4 / 40, abs=1e-12)


@given(st.integers(2, 14), st.integers(1, 5), st.integers(0, 10**6))
def test_positive_iff_more_than_d_points(m, d, seed):
    Z = random_set(np.random.default_rng(seed), m, 1)
    pos, witness = omega_positive(Z, d)
    assert pos == (m > d)
    if pos:
        assert covering_bounds_nd(Z, witness).m_lo > d


# -- minimum-distance bound -------------------------------------------------------------

def test_min_distance_examples():
    Z = PointSet([[-0.3], [0.0], [0.3]])
    assert omega_min_distance_bound(Z, 2) == pytest.approx(0.3)
    assert omega_min_distance_bound(PointSet([[0.0], [0.5]]), 3) == 0.0
    assert omega_min_distance_bound(make_grid_1d(11), 3) == pytest.approx(1.6, abs=1e-12)


@given(st.integers(2, 30), st.integers(1, 2), st.integers(1, 3), st.integers(0, 10**6))
def test_min_distance_below_lo(m, n, d, seed):
    Z = random_set(np.random.default_rng(seed), m, n)
    res = omega(Z, d)
    assert omega_min_distance_bound(Z, d) <= res.omega_lo + 1e-12
    assert res.omega_lo <= res.omega_hi


# -- omega in higher dimension ----------------------------------------------------------

def test_nd_collapses_in_1d():
    Z = make_grid_1d(9)
    assert omega_nd(Z, 2).omega_lo == omega_1d(Z, 2).omega_lo


@pytest.mark.parametrize("s,d", [(3, 2), (4, 3), (5, 3)])
def test_small_2d_grid_zero(s, d):
    assert omega_nd(make_grid_nd(2, s), d).omega_hi == 0.0


def test_2d_grid_positive():
    G = make_grid_nd(2, 41)
    res = omega_nd(G, 1)
    assert res.omega_lo > 0
    pos, eps = omega_positive(G, 1)
    assert pos and covering_bounds_nd(G, eps).m_lo > vitushkin_eval(VitushkinModel.builtin(2, 1), eps)
    assert not omega_positive(make_grid_nd(2, 3), 3)[0]


def nd_brute_lo(Z, d):
    """Scan candidate scales and their left limits with packing counts."""
    model = VitushkinModel.builtin(Z.dim, d)
    t = cover_table(Z)
    best = 0.0
    for c in t.cand[1:]:
        for e in (c * (1 - 1e-9), c):
            best = max(best, e ** Z.dim * (covering_bounds_nd(Z, e).m_lo - vitushkin_eval(model, e)))
    return best


@given(st.integers(2, 40), st.integers(0, 10**6))
def test_nd_interval_contains_scan(m, seed):
    Z = random_set(np.random.default_rng(seed), m, 2, round_to=1 / 32)
    res = omega_nd(Z, 1)
    scan = nd_brute_lo(Z, 1)
    assert scan <= res.omega_lo + 1e-6 * max(1.0, res.omega_lo)
    assert res.omega_lo <= res.omega_hi


def test_span_curve_csv():
    rows = span_curve(make_grid_1d(11), 3)
    assert rows[0][0] == pytest.approx(0.2, abs=1e-15)
    assert rows[0][3] == pytest.approx(1.6, abs=1e-12)
    assert span_curve_csv(make_grid_1d(5), 2).startswith("eps,m_lo,m_hi,value_lo,value_hi\n")


# -- analytic evaluators ------------------------------------------------------------------

def test_epsilon1():
    assert epsilon1(2, 3) == pytest.approx(0.96, rel=1e-12)
    assert epsilon1(2, 1) == pytest.approx(8.0, rel=1e-12)
    assert epsilon1(2, 1, cap=2.0) == 2.0
    with pytest.raises(NotApplicableError):
        epsilon1(1, 3)
    vals = [epsilon1(2, d) for d in range(1, 60)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))
    # (2d - 1)^2 eps <= 8d  =>  eps -> 2 / d, shrinking
    assert vals[-1] == pytest.approx(8 * 59 / (2 * 59 - 1) ** 2, rel=1e-12)


def test_hausdorff_growth_bound():
    inp = AnalyticBoundInput(2, 3, s=1.5, H=1.0, alpha0=math.sqrt(2) * 0.5)
    e2 = (1 / (192 * 2 ** 0.75)) ** 2
    res = theorem_31_bound(inp)
    assert res.eps_hat == pytest.approx(min(0.5, 0.96, e2), rel=1e-12)
    assert res.omega_lower == pytest.approx(0.25 * res.eps_hat ** 0.5, rel=1e-12)


def test_hausdorff_growth_scaling():
    # when eps_hat = eps_2 the bound behaves like H^(1/sigma)
    b1 = theorem_31_bound(AnalyticBoundInput(2, 3, s=1.5, H=1e-3, alpha0=1.0))
    b2 = theorem_31_bound(AnalyticBoundInput(2, 3, s=1.5, H=2e-3, alpha0=1.0))
    assert b2.omega_lower / b1.omega_lower == pytest.approx(2 ** 2, rel=1e-9)
    tiny = theorem_31_bound(AnalyticBoundInput(2, 3, s=1.5, H=1e-12, alpha0=1.0))
    assert tiny.omega_lower < 1e-20
    with pytest.raises(InvalidParameterError):
        theorem_31_bound(AnalyticBoundInput(2, 3, s=1.0, H=1.0, alpha0=1.0))


def test_covering_growth_bound():
    res = theorem_32_bound(AnalyticBoundInput(2, 3, s=1.5, C_s=1.0, eps0=0.5))
    assert res.eps_hat == pytest.approx(24 ** (-2 / 3), rel=1e-12)
    assert res.eps_hat == pytest.approx(0.1203, abs=2e-4)  # quoted to four places
    assert res.omega_lower == pytest.approx(0.0867, abs=1e-4)
    full = theorem_32_bound(AnalyticBoundInput(2, 3, s=2.0, C_s=3.0, eps0=0.1))
    assert full.omega_lower == pytest.approx(0.75, rel=1e-12)
    knob = theorem_32_bound(AnalyticBoundInput(2, 3, s=1.5, C_s=1.0, eps0=0.5), eps2_factor=8.0)
    assert knob.eps_hat == pytest.approx((1 / 192) ** (2 / 3), rel=1e-12)


def test_codimension_one_bound():
    res = theorem_33_bound(AnalyticBoundInput(2, 3, C=48.0, eps0=1.0))
    assert res.eps_hat == pytest.approx(0.48, rel=1e-12)
    assert res.omega_lower == pytest.approx(5.76, rel=1e-12)
    near = theorem_33_bound(AnalyticBoundInput(2, 3, C=24.0 + 1e-9, eps0=1.0))
    assert near.omega_lower < 1e-8
    with pytest.raises(NotApplicableError):
        theorem_33_bound(AnalyticBoundInput(2, 3, C=24.0, eps0=1.0))


def test_hypersurface_bound():
    scale = 2 * math.sqrt(2)
    res = hypersurface_bound(2, 3, H=scale * 48.0, alpha0=math.sqrt(2))
    assert res == theorem_33_bound(AnalyticBoundInput(2, 3, C=48.0, eps0=1.0))
    with pytest.raises(NotApplicableError):
        hypersurface_bound(2, 3, H=scale * 24.0, alpha0=1.0)
