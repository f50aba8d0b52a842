"""Numerical kernels shared by the rest of the package.

DFT amplitudes, ordinary least squares with coefficient covariance, and the
chi-squared upper tail probability.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass

import numpy as np

from .exceptions import (
    DegenerateDesignError,
    InvalidInputError,
    UnderdeterminedError,
)

__all__ = [
    "Spectrum",
    "LeastSquaresFit",
    "dft_amplitudes",
    "solve_least_squares",
    "chi2_sf",
    "regularized_gamma_q",
    "RANK_TOL",
]

# smallest/largest singular value below which a design is called degenerate
RANK_TOL = 1e-10

_GAMMA_EPS = 1e-16
_GAMMA_MAX_ITER = 10_000
_TINY = 1e-300


@dataclass(frozen=True)
class Spectrum:
    """Amplitude spectrum of a real window.

    ``freqs[k] = k / l`` (cycles per sample) and ``amps[k] = |phi(k)|``.
    """

    freqs: np.ndarray
    amps: np.ndarray

    def __post_init__(self):
        freqs = np.asarray(self.freqs, dtype=float)
        amps = np.asarray(self.amps, dtype=float)
        if freqs.ndim != 1 or freqs.shape != amps.shape:
            raise InvalidInputError("freqs and amps must be 1-D arrays of equal length")
        object.__setattr__(self, "freqs", freqs)
        object.__setattr__(self, "amps", amps)

    def __len__(self):
        return len(self.freqs)


@dataclass(frozen=True)
class LeastSquaresFit:
    coeffs: np.ndarray
    residual_variance: float
    coeff_covariance: np.ndarray
    n_obs: int
    n_params: int
    rss: float
    fitted: np.ndarray

    @property
    def std_errors(self) -> np.ndarray:
        return np.sqrt(np.clip(np.diag(self.coeff_covariance), 0.0, None))


def _check_finite(x: np.ndarray, what: str) -> None:
    bad = np.flatnonzero(~np.isfinite(x))
    if bad.size:
        raise InvalidInputError(f"{what} has non-finite value at index {int(bad[0])}")


def dft_amplitudes(window) -> Spectrum:
    """Magnitudes of the unnormalized DFT of a real window.

    Parameters
    ----------
    window : array_like, shape (l,)
        Real samples, ``l >= 2``.

    Returns
    -------
    Spectrum
        ``amps[k] = |sum_t x[t] exp(-2j*pi*k*t/l)|`` for ``k = 0..l-1``.
    """
    x = np.asarray(window, dtype=float)
    if x.ndim != 1:
        raise InvalidInputError("window must be one-dimensional")
    if x.size < 2:
        raise InvalidInputError(f"window length must be >= 2, got {x.size}")
    _check_finite(x, "window")
    l = x.size
    amps = np.abs(np.fft.fft(x))
    return Spectrum(freqs=np.arange(l) / l, amps=amps)


def solve_least_squares(design, targets) -> LeastSquaresFit:
    """Ordinary least squares with the classical coefficient covariance.

    The solve goes through an SVD of the column-equilibrated design, so the
    rank test is insensitive to the units of individual regressors.

    Raises
    ------
    UnderdeterminedError
        If ``n <= p``.
    DegenerateDesignError
        If ``s_min / s_max < RANK_TOL`` for the equilibrated design.
    """
    X = np.asarray(design, dtype=float)
    y = np.asarray(targets, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
        raise InvalidInputError(
            f"design {X.shape} and targets {y.shape} are not conformable"
        )
    n, p = X.shape
    if n <= p:
        raise UnderdeterminedError(f"need more observations than parameters (n={n}, p={p})")
    _check_finite(X.ravel(), "design")
    _check_finite(y, "targets")

    norms = np.sqrt(np.einsum("ij,ij->j", X, X))
    if np.any(norms == 0.0):
        col = int(np.flatnonzero(norms == 0.0)[0])
        raise DegenerateDesignError(f"design column {col} is identically zero")
    Xs = X / norms
    U, s, Vt = np.linalg.svd(Xs, full_matrices=False)
    if s[-1] / s[0] < RANK_TOL:
        raise DegenerateDesignError(
            f"design is rank deficient (condition ratio {s[-1] / s[0]:.3g} < {RANK_TOL:g})"
        )
    V_over_s = Vt.T / s
    coeffs = (V_over_s @ (U.T @ y)) / norms
    fitted = X @ coeffs
    resid = y - fitted
    rss = float(resid @ resid)
    sigma2 = rss / (n - p)
    # (X'X)^-1 = D^-1 V S^-2 V' D^-1 with D = diag(norms)
    xtx_inv = (V_over_s @ V_over_s.T) / np.outer(norms, norms)
    cov = sigma2 * xtx_inv
    cov = 0.5 * (cov + cov.T)
    return LeastSquaresFit(
        coeffs=coeffs,
        residual_variance=sigma2,
        coeff_covariance=cov,
        n_obs=n,
        n_params=p,
        rss=rss,
        fitted=fitted,
    )


def _gamma_p_series(a: float, x: float) -> float:
    # P(a, x) = x^a e^-x / Gamma(a+1) * sum_n x^n / ((a+1)...(a+n))
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(_GAMMA_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _GAMMA_EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_q_contfrac(a: float, x: float) -> float:
    # modified Lentz evaluation of the Legendre continued fraction for Q(a, x)
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _GAMMA_MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _GAMMA_EPS:
            break
    return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h


def regularized_gamma_q(a: float, x: float) -> float:
    """Regularized upper incomplete gamma function ``Q(a, x)``."""
    if a <= 0:
        raise InvalidInputError(f"shape must be positive, got {a}")
    if x < 0:
        raise InvalidInputError(f"argument must be nonnegative, got {x}")
    if x == 0.0:
        return 1.0
    if math.isinf(x):
        return 0.0
    if x < a + 1.0:
        return min(1.0, max(0.0, 1.0 - _gamma_p_series(a, x)))
    return min(1.0, max(0.0, _gamma_q_contfrac(a, x)))


def chi2_sf(x: float, k: int) -> float:
    """Upper tail ``P[chi2_k > x]``."""
    if isinstance(k, bool) or not isinstance(k, numbers.Integral) or k < 1:
        raise InvalidInputError(f"degrees of freedom must be a positive integer, got {k!r}")
    x = float(x)
    if math.isnan(x) or x < 0:
        raise InvalidInputError(f"chi-squared statistic must be >= 0, got {x}")
    return regularized_gamma_q(0.5 * int(k), 0.5 * x)
