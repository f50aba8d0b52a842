"""Power-law spectral features of a time series.

Each sliding window is mean-removed, transformed with the DFT, and the
amplitudes at positive frequencies ``k = 1..l//2`` are regressed in log-log
space::

    log A(f) = a - lam * log f

The sequences of ``a`` and ``lam`` across windows are the features handed to
the Granger test.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .exceptions import (
    DegenerateSpectrumError,
    InsufficientSpectrumError,
    InvalidInputError,
    SeriesTooShortError,
)
from .numerics import Spectrum, chi2_sf, solve_least_squares

__all__ = [
    "WindowPlan",
    "SpectralFit",
    "FeatureSeries",
    "WindowSelection",
    "DEFAULT_PLAN",
    "MIN_SELECTION_LENGTH",
    "fit_power_law",
    "extract_features",
    "select_window_length",
    "window_count",
]

MIN_WINDOW = 8
MIN_SELECTION_LENGTH = 50
# squared relative rounding level of a log-amplitude (16 ulps)
_ROUNDOFF2 = (16 * np.finfo(float).eps) ** 2


def window_count(n_samples: int, length: int, stride: int) -> int:
    """Number of windows of ``length`` at ``stride`` that fit in ``n_samples``."""
    if n_samples < length:
        return 0
    return (n_samples - length) // stride + 1


@dataclass(frozen=True)
class WindowPlan:
    length: int = 50
    stride: int = 1

    def __post_init__(self):
        l, s = self.length, self.stride
        if int(l) != l or int(s) != s:
            raise InvalidInputError(f"window length and stride must be integers, got ({l}, {s})")
        object.__setattr__(self, "length", int(l))
        object.__setattr__(self, "stride", int(s))
        if self.length < MIN_WINDOW:
            raise InvalidInputError(f"window length must be >= {MIN_WINDOW}, got {self.length}")
        if not 1 <= self.stride < self.length:
            raise InvalidInputError(
                f"stride must satisfy 1 <= stride < length, got stride={self.stride}, "
                f"length={self.length}"
            )

    def n_windows(self, n_samples: int) -> int:
        return window_count(n_samples, self.length, self.stride)


DEFAULT_PLAN = WindowPlan(50, 1)


@dataclass(frozen=True)
class SpectralFit:
    intercept: float
    slope: float  # lam; the fitted log-log gradient is -slope
    slope_p_value: float
    r_squared: float
    n_points: int


def _slope_p_value(intercept: float, grad: float, rss: float, sxx: float, syy: float,
                   n: int) -> float:
    """Wald p-value of ``grad != 0`` referred to chi-squared with one df.

    The residual sum of squares is floored at the rounding level of the
    log-amplitudes, so an exact fit is judged against machine precision
    rather than against its own rounding noise.
    """
    if n <= 2 or sxx <= 0.0:
        return 1.0
    scale2 = syy + n * intercept * intercept + sxx * grad * grad
    rss = max(rss, _ROUNDOFF2 * scale2)
    if rss <= 0.0:
        return 1.0 if grad == 0.0 else 0.0
    var_grad = rss / (n - 2) / sxx
    return chi2_sf(grad * grad / var_grad, 1)


def _r_squared(rss: float, syy: float) -> float:
    if syy <= 0.0:
        return 1.0
    return min(1.0, max(0.0, 1.0 - rss / syy))


def fit_power_law(spectrum: Spectrum) -> SpectralFit:
    """OLS fit of ``log A = a - lam log f`` over ``0 < f <= 1/2``.

    The DC bin and the mirrored upper half are ignored, as are bins whose
    amplitude is exactly zero.

    Raises
    ------
    DegenerateSpectrumError
        All amplitudes in the fitting band are zero.
    InsufficientSpectrumError
        Fewer than three usable points remain.
    """
    f = spectrum.freqs
    A = spectrum.amps
    band = (f > 0.0) & (f <= 0.5)
    if not band.any():
        raise InsufficientSpectrumError("spectrum has no frequencies in (0, 1/2]")
    if np.all(A[band] == 0.0):
        raise DegenerateSpectrumError("all positive-frequency amplitudes are zero")
    usable = band & (A > 0.0) & np.isfinite(A)
    n = int(usable.sum())
    if n < 3:
        raise InsufficientSpectrumError(
            f"need at least 3 positive-amplitude frequencies for the fit, got {n}"
        )
    logf = np.log(f[usable])
    logA = np.log(A[usable])
    design = np.column_stack([np.ones(n), logf])
    fit = solve_least_squares(design, logA)
    a, grad = fit.coeffs
    dev = logA - logA.mean()
    syy = float(dev @ dev)
    dx = logf - logf.mean()
    p = _slope_p_value(float(a), float(grad), fit.rss, float(dx @ dx), syy, n)
    return SpectralFit(
        intercept=float(a),
        slope=float(-grad),
        slope_p_value=p,
        r_squared=_r_squared(fit.rss, syy),
        n_points=n,
    )


@dataclass(frozen=True)
class FeatureSeries:
    """Per-window spectral parameters of one series."""

    a_series: np.ndarray
    lambda_series: np.ndarray
    plan: WindowPlan
    rss: np.ndarray = field(repr=False)
    sxx: np.ndarray = field(repr=False)
    syy: np.ndarray = field(repr=False)
    n_points: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.lambda_series)

    def slope_p_values(self) -> np.ndarray:
        """Wald p-value of ``lam != 0`` for every window."""
        return np.array(
            [
                _slope_p_value(a, -lam, r, sx, sy, int(n))
                for a, lam, r, sx, sy, n in zip(
                    self.a_series, self.lambda_series, self.rss, self.sxx, self.syy, self.n_points
                )
            ]
        )

    def r_squared(self) -> np.ndarray:
        return np.array([_r_squared(r, sy) for r, sy in zip(self.rss, self.syy)])


def _as_series(series) -> np.ndarray:
    x = np.asarray(series, dtype=float)
    if x.ndim != 1:
        raise InvalidInputError("series must be one-dimensional")
    bad = np.flatnonzero(~np.isfinite(x))
    if bad.size:
        raise InvalidInputError(f"series has non-finite value at index {int(bad[0])}")
    return x


def extract_features(series, plan: WindowPlan = DEFAULT_PLAN, backend: str | None = None):
    """Sliding-window ``(a, lam)`` features of a single series.

    Parameters
    ----------
    series : array_like, shape (L,)
    plan : WindowPlan
    backend : {"cython", "python"}, optional
        Kernel implementation; defaults to the one selected at import.

    Returns
    -------
    FeatureSeries
        ``(L - l) // s + 1`` windows; window ``k`` covers samples
        ``[k*s, k*s + l)``.
    """
    x = _as_series(series)
    l, s = plan.length, plan.stride
    if x.size < l:
        raise SeriesTooShortError(
            f"series of length {x.size} is shorter than the window ({l})", required=l
        )
    impl = kernels if backend is None else kernels.get_backend(backend)
    a, grad, rss, sxx, syy, n_used = impl.window_fits(x, l, s)

    if np.any(n_used < 3):
        k = int(np.flatnonzero(n_used < 3)[0])
        if n_used[k] == 0:
            raise DegenerateSpectrumError(
                f"window {k}: all positive-frequency amplitudes are zero", window=k
            )
        raise InsufficientSpectrumError(
            f"window {k}: only {int(n_used[k])} positive-amplitude frequencies", window=k
        )
    lam = -grad
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(lam))):
        k = int(np.flatnonzero(~(np.isfinite(a) & np.isfinite(lam)))[0])
        raise DegenerateSpectrumError(f"window {k}: non-finite spectral fit", window=k)
    return FeatureSeries(
        a_series=a,
        lambda_series=lam,
        plan=plan,
        rss=rss,
        sxx=sxx,
        syy=syy,
        n_points=n_used,
    )


@dataclass(frozen=True)
class WindowSelection:
    length: int
    significant: bool
    median_p_values: dict


def select_window_length(
    series,
    candidates=(50, 100, 150, 200),
    alpha: float = 0.05,
    backend: str | None = None,
) -> WindowSelection:
    """Shortest candidate window whose power-law slope is significant.

    For each candidate the slope p-value is computed on every window at
    stride 1 and summarized by its median. The first candidate (ascending)
    with median ``<= alpha`` wins; if none does, the longest candidate is
    returned with ``significant=False``.
    """
    x = _as_series(series)
    cands = [int(c) for c in candidates]
    if not cands:
        raise InvalidInputError("window candidates must be nonempty")
    if any(b <= a for a, b in zip(cands, cands[1:])):
        raise InvalidInputError(f"window candidates must be strictly ascending, got {cands}")
    if cands[0] < MIN_SELECTION_LENGTH:
        raise InvalidInputError(
            f"window candidates must be >= {MIN_SELECTION_LENGTH}, got {cands[0]}"
        )
    if cands[-1] > x.size:
        raise InvalidInputError(
            f"window candidate {cands[-1]} exceeds series length {x.size}"
        )
    if not 0.0 < alpha < 1.0:
        raise InvalidInputError(f"alpha must lie in (0, 1), got {alpha}")

    medians = {}
    for l in cands:
        feats = extract_features(x, WindowPlan(l, 1), backend=backend)
        medians[l] = float(np.median(feats.slope_p_values()))
        if medians[l] <= alpha:
            return WindowSelection(length=l, significant=True, median_p_values=medians)
    return WindowSelection(length=cands[-1], significant=False, median_p_values=medians)
