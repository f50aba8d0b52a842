import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import normal_equations
from placy.exceptions import (
    DegenerateDesignError,
    InsufficientSamplesError,
    InvalidInputError,
    SingularRestrictionError,
)
from placy.granger import VarSpec, build_lagged_design, granger_pair, wald_granger_test
from placy.numerics import chi2_sf


def _rss(X, y):
    b = normal_equations(X, y)
    r = y - X @ b
    return r @ r


def wald_oracle(y, x, covs, T):
    """Restricted/unrestricted residual comparison; equals the Wald form for OLS."""
    data = {"y": y, "x": x, **{f"z{i}": c for i, c in enumerate(covs)}}
    spec = VarSpec("y", ("x",), tuple(f"z{i}" for i in range(len(covs))), T)
    X, target = build_lagged_design(data, spec)
    keep = np.r_[0 : 1 + T, 1 + 2 * T : X.shape[1]]
    rss_u = _rss(X, target)
    rss_r = _rss(X[:, keep], target)
    n, p = X.shape
    return (rss_r - rss_u) / (rss_u / (n - p))


# --- VarSpec -----------------------------------------------------------------

def test_varspec_counts():
    spec = VarSpec("y", ("a", "b"), ("c",), 4)
    assert spec.n_params == 1 + 4 * 4
    assert spec.n_restrictions == 8


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(caused="y", causing=("y",)),
        dict(caused="y", causing=()),
        dict(caused="y", causing=("x",), covariates=("x",)),
        dict(caused="y", causing=("x",), max_lag=0),
        dict(caused="y", causing=("x",), max_lag=1.5),
    ],
)
def test_varspec_invalid(kwargs):
    with pytest.raises(InvalidInputError):
        VarSpec(**kwargs)


# --- design ------------------------------------------------------------------

def test_design_single_lag():
    X, y = build_lagged_design({"y": [1, 2, 3, 4], "x": [10, 20, 30, 40]}, VarSpec("y", ("x",), max_lag=1))
    assert X.shape == (3, 3)
    np.testing.assert_array_equal(X[0], [1, 1, 10])
    np.testing.assert_array_equal(y, [2, 3, 4])


def test_design_counting():
    X, y = build_lagged_design({"y": np.arange(5.0), "x": np.arange(5.0) ** 2}, VarSpec("y", ("x",), max_lag=2))
    assert X.shape == (3, 5)
    # row for t=2: intercept, y(1), y(0), x(1), x(0)
    np.testing.assert_array_equal(X[0], [1, 1, 0, 1, 0])
    np.testing.assert_array_equal(y, [2, 3, 4])


def test_design_column_order_follows_spec_not_storage(rng):
    cols = {k: rng.normal(size=30) for k in "yabc"}
    spec = VarSpec("y", ("b", "a"), ("c",), 3)
    X1, y1 = build_lagged_design(cols, spec)
    shuffled = {k: cols[k] for k in "cbya"}
    X2, y2 = build_lagged_design(shuffled, spec)
    np.testing.assert_array_equal(X1, X2)
    np.testing.assert_array_equal(y1, y2)
    np.testing.assert_array_equal(X1[:, 4], cols["b"][2:-1])  # first lag of b, then a
    np.testing.assert_array_equal(X1[:, 7], cols["a"][2:-1])


def test_design_too_short():
    with pytest.raises(InsufficientSamplesError) as err:
        build_lagged_design({"y": [1.0, 2.0], "x": [1.0, 2.0]}, VarSpec("y", ("x",), max_lag=2))
    assert err.value.required == 3


def test_design_length_mismatch():
    with pytest.raises(InvalidInputError):
        build_lagged_design({"y": np.ones(10), "x": np.ones(9)}, VarSpec("y", ("x",), max_lag=1))


def test_design_unknown_series():
    with pytest.raises(InvalidInputError, match="'q'"):
        build_lagged_design({"y": np.ones(10)}, VarSpec("y", ("q",), max_lag=1))


# --- Wald test -----------------------------------------------------------------

def test_wald_matches_rss_oracle(rng):
    x = rng.normal(size=300)
    z = rng.normal(size=300)
    y = np.r_[0, 0.3 * x[:-1]] + 0.2 * np.r_[0, z[:-1]] + rng.normal(size=300)
    res = granger_pair(y, [x], max_lag=4, covariates=[z])
    assert res.statistic == pytest.approx(wald_oracle(y, x, [z], 4), rel=1e-8)
    assert res.df == 4
    assert res.p_value == chi2_sf(res.statistic, res.df)
    assert res.n_effective == 296


def test_wald_detects_lagged_driver(rng):
    x = rng.normal(size=500)
    y = np.r_[0.0, 0.8 * x[:-1]] + 0.1 * rng.normal(size=500)
    assert granger_pair(y, [x], max_lag=5).p_value < 1e-3


def test_wald_null_calibration():
    rejections = 0
    for seed in range(1000):
        r = np.random.default_rng(seed)
        x, y = r.normal(size=(2, 500))
        rejections += granger_pair(y, [x], max_lag=5).p_value < 0.05
    assert 0.03 <= rejections / 1000 <= 0.07


def test_wald_deterministic_self_lag():
    # y is an exact function of its own past: the causing block can explain nothing
    y = 0.9 ** np.arange(200)
    x = np.random.default_rng(3).normal(size=200)
    try:
        res = granger_pair(y, [x], max_lag=3)
    except (DegenerateDesignError, SingularRestrictionError):
        return
    assert res.p_value > 0.05


def test_wald_exact_fit_is_singular(rng):
    x = rng.normal(size=100)
    y = np.zeros(100)
    for t in range(1, 100):
        y[t] = 0.5 * y[t - 1] + 2.0 * x[t - 1]
    # with one lag the design is full rank but the residuals vanish
    with pytest.raises(SingularRestrictionError):
        granger_pair(y, [x], max_lag=1)


def test_wald_duplicated_series_is_degenerate(rng):
    x = rng.normal(size=100)
    y = rng.normal(size=100)
    with pytest.raises(DegenerateDesignError):
        granger_pair(y, [x, x.copy()], max_lag=2)


def test_wald_insufficient_rows(rng):
    spec = VarSpec("y", ("x",), max_lag=3)
    with pytest.raises(InsufficientSamplesError) as err:
        wald_granger_test(spec, {"y": rng.normal(size=9), "x": rng.normal(size=9)})
    assert err.value.required == spec.min_length() == 11


@settings(max_examples=30, deadline=None)
@given(
    st.integers(0, 10_000),
    st.floats(-1e3, 1e3).filter(lambda c: abs(c) > 1e-3),
    st.floats(-1e3, 1e3).filter(lambda c: abs(c) > 1e-3),
    st.floats(-1e3, 1e3).filter(lambda c: abs(c) > 1e-3),
)
def test_wald_scale_invariance(seed, cy, cx, cz):
    r = np.random.default_rng(seed)
    x, y, z = r.normal(size=(3, 120))
    base = granger_pair(y, [x], 3, [z])
    scaled = granger_pair(cy * y, [cx * x], 3, [cz * z])
    assert scaled.statistic == pytest.approx(base.statistic, rel=1e-8, abs=1e-8)
    assert scaled.p_value == pytest.approx(base.p_value, abs=1e-8)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 6), st.integers(1, 3))
def test_wald_df_and_nonnegativity(seed, T, k):
    r = np.random.default_rng(seed)
    cols = r.normal(size=(k + 1, 80))
    res = granger_pair(cols[0], list(cols[1:]), T)
    assert res.df == T * k
    assert res.statistic >= 0
    assert 0 <= res.p_value <= 1


def test_wald_covariates_not_restricted(rng):
    # a strong driver placed among the covariates must not produce a rejection
    z = rng.normal(size=400)
    x = rng.normal(size=400)
    y = np.r_[0.0, 0.9 * z[:-1]] + 0.5 * rng.normal(size=400)
    assert granger_pair(y, [z], 2).p_value < 1e-6
    assert granger_pair(y, [x], 2, [z]).p_value > 1e-3
