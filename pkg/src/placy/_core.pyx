# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels (see ``_pykernels`` for the reference semantics)."""

import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, log, sqrt, M_PI

cnp.import_array()


def window_fits(x, Py_ssize_t l, Py_ssize_t s):
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t L = xv.shape[0]
    cdef Py_ssize_t n_win = (L - l) // s + 1
    cdef Py_ssize_t m = l // 2
    cdef Py_ssize_t k, t, w, start, j

    cdef double[:, ::1] ctab = np.empty((m, l))
    cdef double[:, ::1] stab = np.empty((m, l))
    cdef double[::1] logf = np.empty(m)
    for k in range(m):
        logf[k] = log((k + 1) / <double>l)
        for t in range(l):
            j = ((k + 1) * t) % l
            ctab[k, t] = cos(2.0 * M_PI * j / l)
            stab[k, t] = -sin(2.0 * M_PI * j / l)

    out_a = np.empty(n_win)
    out_b = np.empty(n_win)
    out_rss = np.empty(n_win)
    out_sxx = np.empty(n_win)
    out_syy = np.empty(n_win)
    out_n = np.empty(n_win, dtype=np.int64)
    cdef double[::1] va = out_a
    cdef double[::1] vb = out_b
    cdef double[::1] vrss = out_rss
    cdef double[::1] vsxx = out_sxx
    cdef double[::1] vsyy = out_syy
    cdef long long[::1] vn = out_n

    cdef double[::1] buf = np.empty(l)
    cdef double[::1] logA = np.empty(m)
    cdef unsigned char[::1] used = np.empty(m, dtype=np.uint8)
    cdef double mean, re, im, amp, n, mx, my, cxx, cxy, cyy, dx, dy, bb, aa, r, acc

    with nogil:
        for w in range(n_win):
            start = w * s
            mean = 0.0
            for t in range(l):
                mean += xv[start + t]
            mean /= l
            for t in range(l):
                buf[t] = xv[start + t] - mean

            n = 0.0
            mx = 0.0
            my = 0.0
            for k in range(m):
                re = 0.0
                im = 0.0
                for t in range(l):
                    re += buf[t] * ctab[k, t]
                    im += buf[t] * stab[k, t]
                amp = sqrt(re * re + im * im)
                if amp > 0.0:
                    used[k] = 1
                    logA[k] = log(amp)
                    n += 1.0
                    mx += logf[k]
                    my += logA[k]
                else:
                    used[k] = 0
            vn[w] = <long long>n
            if n == 0.0:
                va[w] = 0.0
                vb[w] = 0.0
                vrss[w] = 0.0
                vsxx[w] = 0.0
                vsyy[w] = 0.0
                continue
            mx /= n
            my /= n
            cxx = 0.0
            cxy = 0.0
            cyy = 0.0
            for k in range(m):
                if used[k]:
                    dx = logf[k] - mx
                    dy = logA[k] - my
                    cxx += dx * dx
                    cxy += dx * dy
                    cyy += dy * dy
            if cxx > 0.0:
                bb = cxy / cxx
            else:
                bb = 0.0
            aa = my - bb * mx
            acc = 0.0
            for k in range(m):
                if used[k]:
                    r = logA[k] - aa - bb * logf[k]
                    acc += r * r
            va[w] = aa
            vb[w] = bb
            vrss[w] = acc
            vsxx[w] = cxx
            vsyy[w] = cyy
    return out_a, out_b, out_rss, out_sxx, out_syy, out_n


def ou_path(double x0, double rate, double mu, double sqrt_dt,
            double sigma_b, double sigma_ga, double sigma_gm,
            eb, ega, egm):
    cdef const double[::1] veb = np.ascontiguousarray(eb, dtype=np.float64)
    cdef const double[::1] vga = np.ascontiguousarray(ega, dtype=np.float64)
    cdef const double[::1] vgm = np.ascontiguousarray(egm, dtype=np.float64)
    cdef Py_ssize_t n = vga.shape[0]
    cdef Py_ssize_t t
    out = np.empty(n + 1)
    cdef double[::1] vo = out
    cdef double xt = x0
    cdef double noise
    vo[0] = xt
    with nogil:
        for t in range(n):
            noise = sigma_b * veb[t] + sigma_ga * vga[t] + sigma_gm * vgm[t] * xt
            xt = xt + rate * (mu - xt) + noise * sqrt_dt
            vo[t + 1] = xt
    return out
