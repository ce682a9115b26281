"""Per-cluster power allocation.

Two routes: a closed-form heuristic that maximizes an EE lower bound through
a common scaling factor (Lambert W stationary point, clamped to the feasible
interval), and the optimal quasi-convex method (bisection over candidate EE
levels, each step solving a concave feasibility problem).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .numerics import DEFAULT_TOLERANCES, EmptyPolytopeError, bisect
from .power_model import cluster_tpi_cost
from .precoding import ClusterPrecoder
from .scenario import ScenarioConfig

LN2 = math.log(2.0)

lambert_w0 = kernels.lambert_w0


@dataclass(frozen=True)
class PowerAllocation:
    p: np.ndarray            # per-user effective powers (W)
    feasible: bool
    method: str              # "heuristic" | "optimal"
    ee_bound_bpj: float      # bits/J achieved by the method's own objective
    alpha: float = math.nan  # common scaling factor (heuristic diagnostic)


@dataclass(frozen=True)
class ClusterPowerProblem:
    """Precomputed per-cluster quantities shared by both power-control routes.

    Powers are normalized by the noise power inside the solvers: s = p / sigma2.
    """

    min_power_w: np.ndarray    # rate-floor powers p~ per user
    gain: np.ndarray           # (M_act, U_l) |W_mu|^2
    cap_w: np.ndarray          # per-antenna power limits
    tpd_per_w: np.ndarray      # TPD watts per watt of each user's power
    tpi_w: float               # cluster TPI share
    omega_hz: float
    sigma2_w: float

    @property
    def num_ues(self) -> int:
        return self.min_power_w.shape[0]

    def polytope_empty(self) -> bool:
        """Rate floors against per-antenna caps; gains are nonnegative so the
        floor point is the polytope's minimum."""
        return bool(np.any(self.gain @ self.min_power_w > self.cap_w * (1 + 1e-12)))

    def rate_bps(self, p: np.ndarray) -> float:
        return float(self.omega_hz * np.log1p(np.asarray(p) / self.sigma2_w).sum() / LN2)

    def cost_w(self, p: np.ndarray) -> float:
        return float(self.tpd_per_w @ np.asarray(p)) + self.tpi_w

    def ee_bpj(self, p: np.ndarray) -> float:
        return self.rate_bps(p) / self.cost_w(p)

    def max_power_w(self) -> np.ndarray:
        """Per-user power ceiling if it were alone: min over antennas of cap/gain."""
        with np.errstate(divide="ignore"):
            ratios = np.where(self.gain > 0.0, self.cap_w[:, None] / self.gain, math.inf)
        return ratios.min(axis=0)


def build_problem(precoder: ClusterPrecoder, num_clusters: int,
                  config: ScenarioConfig) -> ClusterPowerProblem:
    num_ues = precoder.w.shape[1]
    sigma2 = config.noise_power_w
    min_power = np.full(
        num_ues,
        sigma2 * (2.0 ** (config.target_rate_bps / config.bandwidth_hz) - 1.0),
    )
    gain = np.abs(precoder.w[list(precoder.active), :]) ** 2
    cap = np.full(gain.shape[0], config.max_da_power_w)
    scale = config.power_loss_coeff / config.pa_efficiency
    tpd_per_w = scale * precoder.column_power
    tpi = cluster_tpi_cost(len(precoder.active), num_ues, num_clusters, config)
    return ClusterPowerProblem(
        min_power_w=min_power,
        gain=gain,
        cap_w=cap,
        tpd_per_w=tpd_per_w,
        tpi_w=tpi,
        omega_hz=config.bandwidth_hz,
        sigma2_w=sigma2,
    )


def scaling_bounds(problem: ClusterPowerProblem):
    """Feasible interval for the common scaling factor: rate floors give the
    lower end, per-antenna limits the upper end."""
    portions = problem.min_power_w / problem.min_power_w.sum()
    alpha_lb = float(problem.min_power_w.sum())
    per_da = problem.gain @ portions
    with np.errstate(divide="ignore"):
        alpha_ub = float(np.where(per_da > 0.0, problem.cap_w / per_da, math.inf).min())
    return alpha_lb, alpha_ub


def heuristic_from_problem(problem: ClusterPowerProblem) -> PowerAllocation:
    portions = problem.min_power_w / problem.min_power_w.sum()
    alpha_lb, alpha_ub = scaling_bounds(problem)
    feasible = alpha_lb <= alpha_ub
    c1 = float(portions.min()) / problem.sigma2_w
    c2 = float(problem.tpd_per_w @ portions)
    c3 = problem.tpi_w
    arg = -1.0 / math.e + c1 * c3 / (c2 * math.e)
    alpha_o = (math.exp(1.0 + kernels.lambert_w0(arg)) - 1.0) / c1
    alpha = min(max(alpha_o, alpha_lb), alpha_ub)
    p = alpha * portions
    bound = (problem.omega_hz * problem.num_ues * math.log2(1.0 + c1 * alpha)
             / (c2 * alpha + c3))
    return PowerAllocation(p=p, feasible=feasible, method="heuristic",
                           ee_bound_bpj=bound, alpha=alpha)


def heuristic_power(precoder: ClusterPrecoder, num_clusters: int,
                    config: ScenarioConfig) -> PowerAllocation:
    """Closed-form EE-lower-bound maximization over a common scaling factor.

    Power portions follow the per-user rate floors; the scaling factor's
    stationary point has a Lambert W form and is clamped to the interval set
    by the rate floors (below) and per-antenna limits (above).
    """
    return heuristic_from_problem(build_problem(precoder, num_clusters, config))


def ee_bound_objective(alpha, problem: ClusterPowerProblem):
    """EE lower bound as a function of the common scaling factor (bits/J)."""
    portions = problem.min_power_w / problem.min_power_w.sum()
    c1 = float(portions.min()) / problem.sigma2_w
    c2 = float(problem.tpd_per_w @ portions)
    alpha = np.asarray(alpha, dtype=float)
    return (problem.omega_hz * problem.num_ues * np.log1p(c1 * alpha) / LN2
            / (c2 * alpha + problem.tpi_w))


def feasibility_check(problem: ClusterPowerProblem, xi_bpj: float,
                      tolerances=DEFAULT_TOLERANCES, stop_at=None):
    """Can the cluster deliver rate >= xi * cost within its constraints?

    Maximizes phi(p) = sum-rate - xi * cost over the rate-floor /
    per-antenna polytope; feasible iff the maximum is nonnegative. Returns
    (feasible, witness powers). With stop_at=0.0 the search stops as soon as
    the sign is decided, which leaves phi short of its true maximum.
    """
    if problem.polytope_empty():
        raise EmptyPolytopeError("rate floors conflict with per-antenna power limits")
    sigma2 = problem.sigma2_w
    d = xi_bpj * problem.tpd_per_w * sigma2 / problem.omega_hz
    shift = xi_bpj * problem.tpi_w / problem.omega_hz
    phi, s = kernels.power_phi_max(
        d, shift,
        problem.min_power_w / sigma2,
        problem.gain * sigma2,
        problem.cap_w,
        tol=tolerances.feasibility_phi,
        max_iter=1500,
        stop_at=stop_at,
    )
    feasible = phi >= 0.0
    return feasible, (sigma2 * np.asarray(s) if feasible else None)


def optimal_from_problem(problem: ClusterPowerProblem, cost_floor_w: float,
                         tolerances=DEFAULT_TOLERANCES) -> PowerAllocation:
    if problem.polytope_empty():
        return PowerAllocation(p=problem.min_power_w.copy(), feasible=False,
                               method="optimal", ee_bound_bpj=0.0)
    s_max = problem.max_power_w() / problem.sigma2_w
    if cost_floor_w <= 0.0:
        cost_floor_w = max(problem.tpi_w, 1e-12)
    xi_ub = float(problem.omega_hz * np.log1p(s_max).sum() / LN2) / cost_floor_w
    # the heuristic point is feasible, so its EE seeds the witness: the
    # bisection can only improve on it
    seed = heuristic_from_problem(problem).p
    witness = {"p": seed, "ee": problem.ee_bpj(seed)}

    def predicate(xi):
        feasible, p = feasibility_check(problem, xi, tolerances, stop_at=0.0)
        if feasible and problem.ee_bpj(p) > witness["ee"]:
            witness["p"] = p
            witness["ee"] = problem.ee_bpj(p)
        return feasible

    tol_bpj = tolerances.bisection_ee * 1e6
    bisect(predicate, 0.0, xi_ub, tol_bpj)
    p = witness["p"]
    return PowerAllocation(p=p, feasible=True, method="optimal",
                           ee_bound_bpj=problem.ee_bpj(p))


def optimal_power(precoder: ClusterPrecoder, num_clusters: int,
                  config: ScenarioConfig,
                  tolerances=DEFAULT_TOLERANCES) -> PowerAllocation:
    """Quasi-convex optimal power control: bisection over the EE level.

    Each bisection step solves the concave feasibility problem; the witness
    at the highest feasible level is returned. Infeasible when the rate
    floors already violate the per-antenna limits.
    """
    prob = build_problem(precoder, num_clusters, config)
    return optimal_from_problem(prob, config.fixed_power_w / num_clusters,
                                tolerances)


def solve_cluster_power(precoder: ClusterPrecoder, num_clusters: int,
                        config: ScenarioConfig,
                        tolerances=DEFAULT_TOLERANCES) -> PowerAllocation:
    if config.power_control == "optimal":
        return optimal_power(precoder, num_clusters, config, tolerances)
    return heuristic_power(precoder, num_clusters, config)
