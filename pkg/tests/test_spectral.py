import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import power_law_window
from placy.exceptions import (
    DegenerateSpectrumError,
    InsufficientSpectrumError,
    InvalidInputError,
    SeriesTooShortError,
)
from placy.numerics import Spectrum, dft_amplitudes
from placy.spectral import (
    DEFAULT_PLAN,
    WindowPlan,
    extract_features,
    fit_power_law,
    select_window_length,
    window_count,
)


# --- WindowPlan --------------------------------------------------------------

def test_default_plan():
    assert DEFAULT_PLAN == WindowPlan(50, 1)


@pytest.mark.parametrize("l,s", [(7, 1), (50, 0), (50, 50), (50, 80), (50.5, 1)])
def test_plan_rejects(l, s):
    with pytest.raises(InvalidInputError):
        WindowPlan(l, s)


@pytest.mark.parametrize("L,l,s,n", [(100, 50, 1, 51), (5000, 50, 1, 4951), (50, 50, 1, 1),
                                     (49, 50, 1, 0), (107, 50, 7, 9)])
def test_window_count(L, l, s, n):
    assert window_count(L, l, s) == n
    assert WindowPlan(l, s).n_windows(L) == n


# --- fit_power_law -----------------------------------------------------------

def test_fit_exact_inverse_square():
    fit = fit_power_law(Spectrum([0.1, 0.2, 0.4], [100, 25, 6.25]))
    assert fit.intercept == pytest.approx(0.0, abs=1e-12)
    assert fit.slope == pytest.approx(2.0, abs=1e-12)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)
    assert fit.n_points == 3


def test_fit_flat_spectrum():
    l = 40
    f = np.arange(l) / l
    fit = fit_power_law(Spectrum(f, np.full(l, 3.7)))
    assert fit.slope == pytest.approx(0.0, abs=1e-12)
    assert fit.intercept == pytest.approx(math.log(3.7), abs=1e-12)
    # the slope is zero up to rounding, so it must not look significant
    assert fit.slope_p_value > 0.5


def test_fit_exact_power_law_is_significant():
    l = 50
    f = np.arange(l) / l
    amps = np.exp(0.3) * np.where(f > 0, f, 1.0) ** -0.2
    fit = fit_power_law(Spectrum(f, amps))
    assert fit.slope_p_value < 1e-12
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)


def test_fit_synthesized_window(rng):
    x = power_law_window(1.3, 0.8, 64, rng)
    fit = fit_power_law(dft_amplitudes(x))
    assert fit.intercept == pytest.approx(1.3, abs=1e-6)
    assert fit.slope == pytest.approx(0.8, abs=1e-6)
    assert fit.n_points == 32


def test_fit_ignores_dc_and_upper_half():
    l = 16
    f = np.arange(l) / l
    amps = np.zeros(l)
    amps[1:9] = f[1:9] ** -1.5
    amps[0] = 1e9
    amps[9:] = 123.0
    fit = fit_power_law(Spectrum(f, amps))
    assert fit.slope == pytest.approx(1.5, abs=1e-12)
    assert fit.n_points == 8


def test_fit_skips_zero_amplitudes():
    l = 20
    f = np.arange(l) / l
    amps = np.zeros(l)
    odd = np.arange(l) % 2 == 1
    amps[odd] = f[odd] ** -1.0
    amps[0] = 0.0
    fit = fit_power_law(Spectrum(f, amps))
    assert fit.n_points == 5
    assert fit.slope == pytest.approx(1.0, abs=1e-12)


def test_fit_all_zero_is_degenerate():
    with pytest.raises(DegenerateSpectrumError):
        fit_power_law(Spectrum(np.arange(10) / 10, np.zeros(10)))


def test_fit_too_few_points():
    f = np.arange(10) / 10
    amps = np.zeros(10)
    amps[1:3] = 1.0
    with pytest.raises(InsufficientSpectrumError):
        fit_power_law(Spectrum(f, amps))


def test_fit_noisy_spectrum_in_unit_range(rng):
    fit = fit_power_law(dft_amplitudes(rng.normal(size=50)))
    assert 0.0 <= fit.slope_p_value <= 1.0
    assert 0.0 <= fit.r_squared <= 1.0


def test_fit_p_value_is_wald_on_slope(rng):
    # compare with the textbook t statistic computed from scratch
    spec = dft_amplitudes(rng.normal(size=64).cumsum())
    fit = fit_power_law(spec)
    m = 32
    lf = np.log(np.arange(1, m + 1) / 64)
    la = np.log(spec.amps[1 : m + 1])
    b, a = np.polyfit(lf, la, 1)
    rss = np.sum((la - a - b * lf) ** 2)
    se = math.sqrt(rss / (m - 2) / np.sum((lf - lf.mean()) ** 2))
    assert fit.slope_p_value == pytest.approx(math.erfc(abs(b / se) / math.sqrt(2)), rel=1e-9)


# --- extract_features --------------------------------------------------------

@pytest.mark.parametrize("L,n", [(100, 51), (5000, 4951)])
def test_extract_counts(L, n, rng):
    feats = extract_features(rng.normal(size=L), WindowPlan(50, 1))
    assert len(feats.a_series) == len(feats.lambda_series) == len(feats) == n
    assert np.all(np.isfinite(feats.a_series)) and np.all(np.isfinite(feats.lambda_series))


def test_extract_stationary_power_law(rng, backend):
    # a signal periodic in l repeats the same window spectrum under every shift
    block = power_law_window(0.0, 1.2, 50, rng)
    x = np.tile(block, 20)
    feats = extract_features(x, WindowPlan(50, 1), backend=backend)
    assert np.std(feats.lambda_series, ddof=1) < 0.05
    np.testing.assert_allclose(feats.lambda_series, 1.2, atol=1e-8)


def test_extract_matches_per_window_fit(rng, backend):
    x = rng.normal(size=300).cumsum()
    plan = WindowPlan(40, 9)
    feats = extract_features(x, plan, backend=backend)
    for k in range(len(feats)):
        w = x[k * 9 : k * 9 + 40]
        fit = fit_power_law(dft_amplitudes(w - w.mean()))
        assert feats.a_series[k] == pytest.approx(fit.intercept, abs=1e-10)
        assert feats.lambda_series[k] == pytest.approx(fit.slope, abs=1e-10)
        assert feats.slope_p_values()[k] == pytest.approx(fit.slope_p_value, rel=1e-6, abs=1e-14)
        assert feats.r_squared()[k] == pytest.approx(fit.r_squared, abs=1e-10)


def test_extract_mean_removed(rng, backend):
    x = rng.normal(size=200)
    f0 = extract_features(x, WindowPlan(32, 4), backend=backend)
    f1 = extract_features(x + 1e3, WindowPlan(32, 4), backend=backend)
    np.testing.assert_allclose(f1.lambda_series, f0.lambda_series, atol=1e-8)


def test_extract_too_short():
    with pytest.raises(SeriesTooShortError) as err:
        extract_features(np.ones(30), WindowPlan(50, 1))
    assert err.value.required == 50


def test_extract_names_failing_window(rng, backend):
    x = rng.normal(size=300)
    x[120:180] = 1.0  # window starting at 120 is constant
    with pytest.raises(DegenerateSpectrumError) as err:
        extract_features(x, WindowPlan(50, 10), backend=backend)
    assert err.value.window == 12
    assert "window 12" in str(err.value)


def test_extract_rejects_non_finite():
    x = np.ones(100)
    x[3] = np.nan
    with pytest.raises(InvalidInputError, match="3"):
        extract_features(x)


@pytest.mark.parametrize("alpha", [0.5, -2.0, 10.0])
def test_scale_preserves_exponents(alpha, rng, backend):
    x = rng.normal(size=400).cumsum()
    plan = WindowPlan(50, 3)
    f0 = extract_features(x, plan, backend=backend)
    f1 = extract_features(alpha * x, plan, backend=backend)
    np.testing.assert_allclose(f1.lambda_series, f0.lambda_series, atol=1e-8, rtol=0)
    np.testing.assert_allclose(f1.a_series - f0.a_series, math.log(abs(alpha)), atol=1e-8, rtol=0)


@settings(max_examples=60, deadline=None)
@given(st.integers(8, 60), st.data())
def test_window_count_law(l, data):
    s = data.draw(st.integers(1, l - 1))
    L = data.draw(st.integers(l, 400))
    x = np.random.default_rng(L * 1000 + l).normal(size=L)
    assert len(extract_features(x, WindowPlan(l, s))) == (L - l) // s + 1


@settings(max_examples=25, deadline=None)
@given(st.integers(8, 50), st.data())
def test_translation_consistency(l, data):
    s = data.draw(st.integers(1, l - 1))
    L = data.draw(st.integers(l + s, 300))
    x = np.random.default_rng(l + 7 * s + 13 * L).normal(size=L).cumsum()
    plan = WindowPlan(l, s)
    full = extract_features(x, plan)
    shifted = extract_features(x[s:], plan)
    np.testing.assert_allclose(shifted.lambda_series, full.lambda_series[1:], atol=1e-12, rtol=0)
    np.testing.assert_allclose(shifted.a_series, full.a_series[1:], atol=1e-12, rtol=0)


# --- select_window_length ----------------------------------------------------

def test_select_clean_power_law(rng):
    x = power_law_window(0.0, 1.5, 2000, rng)
    sel = select_window_length(x, [50, 100, 200], alpha=0.05)
    assert sel.length == 50 and sel.significant
    assert set(sel.median_p_values) == {50}


def test_select_white_noise(rng):
    sel = select_window_length(rng.normal(size=2000), [50, 100, 200], alpha=0.05)
    assert sel.length == 200
    assert not sel.significant
    assert set(sel.median_p_values) == {50, 100, 200}


def test_select_single_candidate_equal_to_length(rng):
    x = rng.normal(size=120)
    sel = select_window_length(x, [120], alpha=0.05)
    assert sel.length == 120


@pytest.mark.parametrize("cands", [[], [40, 100], [100, 50], [50, 5000]])
def test_select_invalid(cands, rng):
    with pytest.raises(InvalidInputError):
        select_window_length(rng.normal(size=1000), cands)


@pytest.mark.parametrize("alpha", [0.0, 1.0, -0.1])
def test_select_invalid_alpha(alpha, rng):
    with pytest.raises(InvalidInputError):
        select_window_length(rng.normal(size=1000), [50], alpha=alpha)
