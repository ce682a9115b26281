# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: Lambert W, greedy assignment sweep, power feasibility.

Mirrors the contracts of ldas.kernels._pure.
"""
from libc.math cimport exp, fabs, log, log1p, sqrt

import numpy as np

BACKEND = "compiled"

cdef double LN2 = 0.6931471805599453
cdef double E = 2.718281828459045
cdef double INV_E = 0.36787944117144233
cdef double S_HUGE = 1e18


cpdef double lambert_w0(double x) except? -1e308:
    """Principal branch of w * exp(w) = x via Halley iteration."""
    cdef double p, w, ew, f, denom
    cdef int i
    if x < -INV_E:
        if x > -INV_E - 1e-15 * (1.0 if fabs(x) < 1.0 else fabs(x)):
            return -1.0
        raise ValueError(f"lambert_w0 domain is x >= -1/e, got {x}")
    if x == 0.0:
        return 0.0
    if x <= -INV_E + 1e-300:
        return -1.0
    if x < -0.25:
        p = sqrt(2.0 * (E * x + 1.0))
        w = -1.0 + p - p * p / 3.0 + 11.0 * p * p * p / 72.0
    elif x < E:
        w = 0.75 * log1p(x)
    else:
        w = log(x)
        w = w - log(w)
    for i in range(60):
        ew = exp(w)
        f = w * ew - x
        denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * (w + 1.0))
        w -= f / denom
        if fabs(f) <= 1e-14 * (fabs(x) if fabs(x) > 1e-290 else 1e-290):
            break
    return w


cpdef greedy_sweep(const long long[::1] da_idx, const long long[::1] ue_idx,
                   quotas, int num_das, int num_ues):
    """Consume metric-sorted (antenna, user) pairs respecting per-user quotas."""
    owner_arr = np.full(num_das, -1, dtype=np.int64)
    remaining_arr = np.asarray(quotas, dtype=np.int64).copy()
    cdef long long[::1] owner = owner_arr
    cdef long long[::1] remaining = remaining_arr
    cdef Py_ssize_t k, n = da_idx.shape[0]
    cdef long long m, u
    cdef int unfilled = 0
    for k in range(num_ues):
        if remaining[k] > 0:
            unfilled += 1
    for k in range(n):
        if unfilled == 0:
            break
        m = da_idx[k]
        u = ue_idx[k]
        if owner[m] >= 0 or remaining[u] <= 0:
            continue
        owner[m] = u
        remaining[u] -= 1
        if remaining[u] == 0:
            unfilled -= 1
    return owner_arr


cdef inline double _s_coord(double load, double lo) noexcept:
    cdef double raw
    if load > 0.0:
        raw = 1.0 / (LN2 * load) - 1.0
        if raw > S_HUGE:
            raw = S_HUGE
    else:
        raw = S_HUGE
    return raw if raw > lo else lo


cdef double _phi_of(double[::1] load, double[::1] d, double[::1] s_lo,
                    double shift, Py_ssize_t n) noexcept:
    cdef double acc = 0.0, sj
    cdef Py_ssize_t j
    for j in range(n):
        sj = _s_coord(load[j], s_lo[j])
        acc += log1p(sj) / LN2 - d[j] * sj
    return acc - shift


def power_phi_max(d_in, shift, s_lo_in, G_in, cap_in, tol=1e-6, max_iter=200,
                  stop_at=None):
    """Maximize f(s) = sum(log2(1+s)) - d.s - shift over {s >= s_lo, G s <= cap}.

    Exact water-filling via cyclic coordinate descent on the dual; see the
    pure backend for the algorithm notes.
    """
    d_arr = np.ascontiguousarray(d_in, dtype=np.float64)
    lo_arr = np.ascontiguousarray(s_lo_in, dtype=np.float64)
    G_arr = np.ascontiguousarray(G_in, dtype=np.float64)
    cap_arr = np.ascontiguousarray(cap_in, dtype=np.float64)
    cdef double[::1] d = d_arr
    cdef double[::1] s_lo = lo_arr
    cdef double[:, ::1] G = G_arr
    cdef double[::1] cap = cap_arr
    cdef Py_ssize_t n = d.shape[0], num_rows = G.shape[0]
    cdef Py_ssize_t i, j, it, b
    cdef double shift_c = shift
    cdef bint has_stop = stop_at is not None
    cdef double stop_c = stop_at if has_stop else 0.0

    s_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] s = s_arr
    lam_arr = np.zeros(num_rows, dtype=np.float64)
    load_arr = d_arr.copy()
    base_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] lam = lam_arr
    cdef double[::1] load = load_arr
    cdef double[::1] base = base_arr

    cdef double fs, worst, v, hi, lo_l, hi_l, mid, new_lam, moved, cap_scale, term

    # floor-point early exit for the sign test
    if has_stop:
        for j in range(n):
            s[j] = s_lo[j]
        fs = 0.0
        for j in range(n):
            fs += log1p(s[j]) / LN2 - d[j] * s[j]
        fs -= shift_c
        if fs >= stop_c:
            return fs, s_arr

    # interior stationary point, exact when every cap row stays slack
    for j in range(n):
        s[j] = _s_coord(d[j], s_lo[j])
    worst = 0.0
    for i in range(num_rows):
        v = -cap[i] * (1.0 + 1e-12)
        for j in range(n):
            v += G[i, j] * s[j]
        if v > worst:
            worst = v
    if worst <= 1e-300:
        fs = 0.0
        for j in range(n):
            fs += log1p(s[j]) / LN2 - d[j] * s[j]
        return fs - shift_c, s_arr

    cap_scale = 1.0
    for i in range(num_rows):
        if fabs(cap[i]) > cap_scale:
            cap_scale = fabs(cap[i])

    cdef int max_sweeps = max_iter
    for it in range(max_sweeps):
        moved = 0.0
        for i in range(num_rows):
            for j in range(n):
                base[j] = load[j] - lam[i] * G[i, j]
            # row value at lambda_i = 0
            v = 0.0
            for j in range(n):
                if G[i, j] > 0.0:
                    v += G[i, j] * _s_coord(base[j], s_lo[j])
            if v <= cap[i] * (1.0 + 1e-15):
                new_lam = 0.0
            else:
                hi = 0.0
                for j in range(n):
                    if G[i, j] > 0.0:
                        term = (1.0 / (LN2 * (1.0 + s_lo[j])) - base[j]) / G[i, j]
                        if term > hi:
                            hi = term
                if hi < 1e-300:
                    hi = 1e-300
                hi *= 1.0 + 1e-9
                lo_l = 0.0
                hi_l = hi
                for b in range(100):
                    mid = 0.5 * (lo_l + hi_l)
                    v = 0.0
                    for j in range(n):
                        if G[i, j] > 0.0:
                            v += G[i, j] * _s_coord(base[j] + mid * G[i, j], s_lo[j])
                    if v > cap[i]:
                        lo_l = mid
                    else:
                        hi_l = mid
                new_lam = hi_l
            if new_lam != lam[i]:
                v = 0.0
                for j in range(n):
                    load[j] = base[j] + new_lam * G[i, j]
                    if G[i, j] > v:
                        v = G[i, j]
                term = fabs(new_lam - lam[i]) * v
                if term > moved:
                    moved = term
                lam[i] = new_lam
        for j in range(n):
            s[j] = _s_coord(load[j], s_lo[j])
        worst = 0.0
        for i in range(num_rows):
            v = -cap[i]
            for j in range(n):
                v += G[i, j] * s[j]
            if v > worst:
                worst = v
        if has_stop:
            fs = _feasible_phi(s, s_lo, G, cap, d, shift_c, n, num_rows)
            if fs >= stop_c:
                _pull(s, s_lo, G, cap, n, num_rows)
                fs = 0.0
                for j in range(n):
                    fs += log1p(s[j]) / LN2 - d[j] * s[j]
                return fs - shift_c, s_arr
        v = 1.0
        for j in range(n):
            if load[j] > v:
                v = load[j]
        if worst <= 1e-12 * cap_scale and moved <= 1e-13 * v:
            break
    _pull(s, s_lo, G, cap, n, num_rows)
    fs = 0.0
    for j in range(n):
        fs += log1p(s[j]) / LN2 - d[j] * s[j]
    return fs - shift_c, s_arr


cdef void _pull(double[::1] s, double[::1] s_lo, double[:, ::1] G,
                double[::1] cap, Py_ssize_t n, Py_ssize_t num_rows) noexcept:
    """Exact radial pull toward the floor point so s becomes feasible."""
    cdef Py_ssize_t i, j
    cdef double load, slack, r = 1.0
    cdef bint collapse = False
    for j in range(n):
        if s[j] < s_lo[j]:
            s[j] = s_lo[j]
    for i in range(num_rows):
        load = 0.0
        slack = cap[i]
        for j in range(n):
            load += G[i, j] * (s[j] - s_lo[j])
            slack -= G[i, j] * s_lo[j]
        if load > slack:
            if slack <= 0.0:
                collapse = True
                break
            if load / slack > r:
                r = load / slack
    if collapse:
        for j in range(n):
            s[j] = s_lo[j]
    elif r > 1.0:
        for j in range(n):
            s[j] = s_lo[j] + (s[j] - s_lo[j]) / r


cdef double _feasible_phi(double[::1] s, double[::1] s_lo, double[:, ::1] G,
                          double[::1] cap, double[::1] d, double shift,
                          Py_ssize_t n, Py_ssize_t num_rows) noexcept:
    """phi at the feasible pullback of s, without mutating s."""
    cdef Py_ssize_t i, j
    cdef double load, slack, r = 1.0, sj, acc = 0.0
    cdef bint collapse = False
    for i in range(num_rows):
        load = 0.0
        slack = cap[i]
        for j in range(n):
            sj = s[j] if s[j] > s_lo[j] else s_lo[j]
            load += G[i, j] * (sj - s_lo[j])
            slack -= G[i, j] * s_lo[j]
        if load > slack:
            if slack <= 0.0:
                collapse = True
                break
            if load / slack > r:
                r = load / slack
    for j in range(n):
        sj = s[j] if s[j] > s_lo[j] else s_lo[j]
        if collapse:
            sj = s_lo[j]
        elif r > 1.0:
            sj = s_lo[j] + (sj - s_lo[j]) / r
        acc += log1p(sj) / LN2 - d[j] * sj
    return acc - shift
