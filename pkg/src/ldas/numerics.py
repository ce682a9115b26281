"""Shared numerical primitives with pinned tolerances.

Bisection over a monotone feasibility predicate, projected concave
maximization over a box-plus-halfspace polytope, and Lambert W.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from . import kernels

LN2 = float(np.log(2.0))


class EmptyPolytopeError(ValueError):
    """The constraint set contains no point."""


@dataclass(frozen=True)
class ToleranceSet:
    """Numerical tolerances, frozen per run and echoed in output metadata."""

    zf_residual: float = 1e-9          # relative Frobenius residual of H S W - I
    penrose: float = 1e-9              # relative, each Penrose identity
    lambert: float = 1e-12             # relative residual of w e^w = x
    feasibility_phi: float = 1e-6      # inner solver, on bandwidth-normalized phi
    bisection_ee: float = 1e-3         # Mb/J
    singular_cutoff: float = 1e-10     # relative singular-value cutoff

    def as_dict(self) -> dict:
        return asdict(self)


DEFAULT_TOLERANCES = ToleranceSet()


def lambert_w0(x: float) -> float:
    """Principal branch of the Lambert W function (w e^w = x, x >= -1/e)."""
    return kernels.lambert_w0(x)


def bisect(predicate, lo: float, hi: float, tol: float) -> float:
    """Largest point with predicate true, assuming predicate(lo) and a
    monotone true-to-false transition before hi.

    Returns x with predicate(x) true and a bracket no wider than tol.
    """
    if lo > hi:
        raise ValueError(f"need lo <= hi, got [{lo}, {hi}]")
    if lo == hi:
        return lo
    if not predicate(lo):
        raise ValueError("predicate(lo) must hold")
    if predicate(hi):
        return hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break  # interval at floating-point resolution
        if predicate(mid):
            lo = mid
        else:
            hi = mid
    return lo


def maximize_concave_over_polytope(phi, grad, lower, a_ub, b_ub, tol=1e-6,
                                   max_iter=2000, x0=None):
    """Maximize a concave phi over {x >= lower, a_ub @ x <= b_ub}.

    Projected gradient ascent with backtracking; projection by alternating
    projections onto the box and halfspaces. Returns (value, argmax). Raises
    EmptyPolytopeError when the constraints are inconsistent (exact test when
    a_ub is elementwise nonnegative).
    """
    lower = np.asarray(lower, dtype=float)
    a_ub = np.atleast_2d(np.asarray(a_ub, dtype=float))
    b_ub = np.atleast_1d(np.asarray(b_ub, dtype=float))
    n = lower.shape[0]
    if a_ub.size == 0:
        a_ub = np.zeros((0, n))
        b_ub = np.zeros(0)
    if np.all(a_ub >= 0.0) and np.all(np.isfinite(lower)):
        if np.any(a_ub @ lower > b_ub * (1.0 + 1e-12) + 1e-300):
            raise EmptyPolytopeError("lower bounds violate the upper constraints")

    row_norm2 = np.einsum("ij,ij->i", a_ub, a_ub)
    row_norm2[row_norm2 == 0.0] = 1.0
    b_scale = max(1.0, float(np.abs(b_ub).max(initial=1.0)))

    def project(x):
        np.maximum(x, lower, out=x)
        for _ in range(200):
            viol = a_ub @ x - b_ub
            if viol.max(initial=0.0) <= 1e-12 * b_scale:
                return x
            for m in np.nonzero(viol > 0.0)[0]:
                v = float(a_ub[m] @ x - b_ub[m])
                if v > 0.0:
                    x -= (v / row_norm2[m]) * a_ub[m]
            np.maximum(x, lower, out=x)
        raise EmptyPolytopeError("projection did not converge; constraints look inconsistent")

    x = project(np.array(lower, dtype=float) if x0 is None
                else np.asarray(x0, dtype=float).copy())
    fx = float(phi(x))
    best_x, best_f = x.copy(), fx
    t = 1.0
    stall = 0
    for _ in range(max_iter):
        g = np.asarray(grad(x), dtype=float)
        improved = False
        for _ in range(60):
            x_new = project(x + t * g)
            f_new = float(phi(x_new))
            if f_new > fx:
                improved = True
                break
            t *= 0.25
            if t < 1e-18 * (1.0 + float(np.abs(x).max(initial=0.0))):
                break
        if not improved:
            break
        gain = f_new - fx
        x, fx = x_new, f_new
        t *= 2.0
        if fx > best_f:
            best_f, best_x = fx, x.copy()
        if gain <= tol * max(1.0, abs(fx)):
            stall += 1
            if stall >= 3:
                break
        else:
            stall = 0
    return best_f, best_x
