"""Pure-Python / numpy implementations of the hot kernels.

Same signatures and semantics as the compiled ``_core`` module. Used when the
extension is not built or when ``PLACY_BACKEND=python``.
"""

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

_CHUNK = 4096


def window_fits(x, l, s):
    """Detrended DFT + log-log OLS on every sliding window.

    Returns six arrays of length ``(len(x) - l) // s + 1``:
    intercept, slope, rss, sxx, syy, n_used.  Only bins ``k = 1..l//2`` with
    strictly positive amplitude enter the fit; ``n_used == 0`` means every
    positive-frequency amplitude was zero.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    n_win = (x.shape[0] - l) // s + 1
    m = l // 2
    logf = np.log(np.arange(1, m + 1) / l)

    intercept = np.empty(n_win)
    slope = np.empty(n_win)
    rss = np.empty(n_win)
    sxx = np.empty(n_win)
    syy = np.empty(n_win)
    n_used = np.empty(n_win, dtype=np.int64)

    windows = sliding_window_view(x, l)[::s]
    for lo in range(0, n_win, _CHUNK):
        hi = min(lo + _CHUNK, n_win)
        w = windows[lo:hi]
        w = w - w.mean(axis=1, keepdims=True)
        amps = np.abs(np.fft.rfft(w, axis=1)[:, 1 : m + 1])
        mask = amps > 0.0
        wt = mask.astype(np.float64)
        with np.errstate(divide="ignore"):
            logA = np.where(mask, np.log(np.where(mask, amps, 1.0)), 0.0)

        n = wt.sum(axis=1)
        safe_n = np.where(n > 0, n, 1.0)
        mx = (wt @ logf) / safe_n
        my = logA.sum(axis=1) / safe_n
        dx = (logf[None, :] - mx[:, None]) * wt
        dy = (logA - my[:, None]) * wt
        cxx = np.einsum("ij,ij->i", dx, dx)
        cxy = np.einsum("ij,ij->i", dx, dy)
        cyy = np.einsum("ij,ij->i", dy, dy)
        with np.errstate(divide="ignore", invalid="ignore"):
            b = np.where(cxx > 0, cxy / np.where(cxx > 0, cxx, 1.0), 0.0)
        a = my - b * mx
        r = (logA - a[:, None] - b[:, None] * logf[None, :]) * wt

        intercept[lo:hi] = a
        slope[lo:hi] = b
        rss[lo:hi] = np.einsum("ij,ij->i", r, r)
        sxx[lo:hi] = cxx
        syy[lo:hi] = cyy
        n_used[lo:hi] = n.astype(np.int64)
    return intercept, slope, rss, sxx, syy, n_used


def ou_path(x0, rate, mu, sqrt_dt, sigma_b, sigma_ga, sigma_gm, eb, ega, egm):
    """Euler recursion of the generalized OU process.

    ``eb``, ``ega``, ``egm`` hold the noise values for the ``L - 1`` steps.
    """
    n = len(ega)
    out = [0.0] * (n + 1)
    xt = float(x0)
    out[0] = xt
    eb = np.asarray(eb, dtype=np.float64).tolist()
    ega = np.asarray(ega, dtype=np.float64).tolist()
    egm = np.asarray(egm, dtype=np.float64).tolist()
    for t in range(n):
        noise = sigma_b * eb[t] + sigma_ga * ega[t] + sigma_gm * egm[t] * xt
        xt = xt + rate * (mu - xt) + noise * sqrt_dt
        out[t + 1] = xt
    return np.array(out, dtype=np.float64)
