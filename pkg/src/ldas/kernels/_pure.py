"""Pure numpy implementation of the hot kernels.

Used when the compiled extension is unavailable or disabled via
LDAS_PURE_PYTHON=1. Same contracts as ldas.kernels._core.
"""
from __future__ import annotations

import math

import numpy as np

BACKEND = "pure"

_LN2 = math.log(2.0)
_INV_E = math.exp(-1.0)
_S_HUGE = 1e18


def lambert_w0(x: float) -> float:
    """Principal branch of w * exp(w) = x, for x >= -1/e.

    Halley iteration; residual |w e^w - x| below 1e-12 relative.
    """
    x = float(x)
    if x < -_INV_E:
        if x > -_INV_E - 1e-15 * max(1.0, abs(x)):
            return -1.0
        raise ValueError(f"lambert_w0 domain is x >= -1/e, got {x}")
    if x == 0.0:
        return 0.0
    if x <= -_INV_E + 1e-300:
        return -1.0
    if x < -0.25:
        p = math.sqrt(2.0 * (math.e * x + 1.0))
        w = -1.0 + p - p * p / 3.0 + 11.0 * p ** 3 / 72.0
    elif x < math.e:
        w = 0.75 * math.log1p(x)
    else:
        lx = math.log(x)
        w = lx - math.log(lx)
    for _ in range(60):
        ew = math.exp(w)
        f = w * ew - x
        denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * (w + 1.0))
        step = f / denom
        w -= step
        if abs(f) <= 1e-14 * max(abs(x), 1e-290):
            break
    return w


def greedy_sweep(da_idx, ue_idx, quotas, num_das: int, num_ues: int):
    """Consume metric-sorted (antenna, user) pairs respecting per-user quotas.

    Returns owner[m] = user index assigned to antenna m, or -1. An antenna is
    consumed on first assignment; a user leaves the pool once its quota fills.
    """
    remaining = np.asarray(quotas, dtype=np.int64).copy()
    unfilled = int(np.count_nonzero(remaining))
    own = [-1] * num_das
    rem = remaining.tolist()
    for m, u in zip(da_idx.tolist(), ue_idx.tolist()):
        if own[m] >= 0 or rem[u] <= 0:
            continue
        own[m] = u
        rem[u] -= 1
        if rem[u] == 0:
            unfilled -= 1
            if unfilled == 0:
                break
    return np.asarray(own, dtype=np.int64)


def _pull_feasible(s, s_lo, G, cap):
    """Exact radial pull toward the floor point so the result is feasible."""
    s = np.maximum(s, s_lo)
    slack = cap - G @ s_lo
    load = G @ (s - s_lo)
    r = 1.0
    for i in range(cap.shape[0]):
        if load[i] > slack[i]:
            if slack[i] <= 0.0:
                return s_lo.copy()
            r = max(r, load[i] / slack[i])
    if r > 1.0:
        s = s_lo + (s - s_lo) / r
    return s


def power_phi_max(d, shift, s_lo, G, cap, tol=1e-6, max_iter=200, stop_at=None):
    """Maximize f(s) = sum(log2(1+s)) - d.s - shift over {s >= s_lo, G s <= cap}.

    d >= 0, G >= 0, and G @ s_lo <= cap are assumed. Exact water-filling:
    each cap row's multiplier solves a monotone one-dimensional equation;
    cyclic exact coordinate descent on the dual reaches the KKT point.
    Returns (f_best, s_best) with s_best feasible. If stop_at is given,
    returns early once f_best crosses it (sign test for the bisection).
    """
    d = np.asarray(d, dtype=float)
    s_lo = np.asarray(s_lo, dtype=float)
    G = np.ascontiguousarray(G, dtype=float)
    cap = np.asarray(cap, dtype=float)
    num_rows = cap.shape[0]

    def s_of(load):
        with np.errstate(divide="ignore"):
            raw = np.where(load > 0.0, 1.0 / (_LN2 * np.maximum(load, 1e-300)) - 1.0,
                           _S_HUGE)
        return np.maximum(np.minimum(raw, _S_HUGE), s_lo)

    def f(s):
        return float(np.log1p(s).sum() / _LN2 - d @ s - shift)

    if stop_at is not None and f(s_lo) >= stop_at:
        return f(s_lo), s_lo.copy()

    s = s_of(d)
    if np.all(G @ s <= cap * (1.0 + 1e-12) + 1e-300):
        return f(s), s

    lam = np.zeros(num_rows)
    load = d.copy()
    cap_scale = max(1.0, float(np.abs(cap).max()))
    for _ in range(max_iter):
        moved = 0.0
        for i in range(num_rows):
            g = G[i]
            base = load - lam[i] * g
            s_zero = s_of(base)
            if g @ s_zero <= cap[i] * (1.0 + 1e-15):
                new_lam = 0.0
            else:
                pos = g > 0.0
                hi = float(np.max((1.0 / (_LN2 * (1.0 + s_lo[pos])) - base[pos])
                                  / g[pos], initial=0.0))
                hi = max(hi, 1e-300) * (1.0 + 1e-9)
                lo_l, hi_l = 0.0, hi
                for _ in range(100):
                    mid = 0.5 * (lo_l + hi_l)
                    if g @ s_of(base + mid * g) > cap[i]:
                        lo_l = mid
                    else:
                        hi_l = mid
                new_lam = hi_l
            if new_lam != lam[i]:
                load = base + new_lam * g
                moved = max(moved, abs(new_lam - lam[i]) * float(g.max(initial=0.0)))
                lam[i] = new_lam
        s = s_of(load)
        worst = float((G @ s - cap).max(initial=0.0))
        if stop_at is not None:
            s_ok = _pull_feasible(s, s_lo, G, cap)
            if f(s_ok) >= stop_at:
                return f(s_ok), s_ok
        if worst <= 1e-12 * cap_scale and moved <= 1e-13 * max(1.0, float(load.max())):
            break
    s = _pull_feasible(s_of(load), s_lo, G, cap)
    return f(s), s
