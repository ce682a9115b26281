"""End-to-end solve of one channel realization.

Selection -> clustering -> per-cluster zero-forcing -> per-cluster power
control, with antenna-count adaptation on infeasibility and an optional
threshold line search. Evaluation recombines the clusters and charges the
actual inter-cluster interference against each user's rate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .antenna_selection import (SelectionAssignment, greedy_select, lcas_select)
from .channel import ChannelRealization, ue_da_distances
from .clustering import ClusterPartition, cluster, distance_table
from .numerics import DEFAULT_TOLERANCES
from .power_control import PowerAllocation, solve_cluster_power
from .power_model import PowerBreakdown, ZERO_BREAKDOWN, network_breakdown, per_da_tx_power
from .precoding import ClusterPrecoder, PrecoderInfeasibleError, zf_precoder
from .scenario import ConfigError, ScenarioConfig, db_to_linear

LN2 = math.log(2.0)


@dataclass(frozen=True)
class ClusterSolution:
    members: tuple
    precoder: ClusterPrecoder | None
    power: PowerAllocation | None

    @property
    def feasible(self) -> bool:
        return self.precoder is not None and self.power is not None and self.power.feasible


@dataclass(frozen=True)
class EEReport:
    ee_mbpj: float
    sum_rate_bps: float
    power: PowerBreakdown
    num_clusters: int
    outage: bool
    per_ue_rate_bps: np.ndarray
    csi_count: int
    gamma_db: float
    quotas: np.ndarray
    peak_da_power_w: float        # assembled per-antenna transmit power, max
    min_design_rate_bps: float    # worst per-user rate before interference


def _solve_clusters(chan: ChannelRealization, partition: ClusterPartition,
                    config: ScenarioConfig, tolerances) -> list[ClusterSolution]:
    solutions = []
    num_clusters = partition.num_clusters
    for members, da_set in zip(partition.clusters, partition.da_sets):
        rows = chan.composite[list(members), :]
        try:
            precoder = zf_precoder(rows, da_set, tolerances)
        except PrecoderInfeasibleError:
            solutions.append(ClusterSolution(members, None, None))
            continue
        power = solve_cluster_power(precoder, num_clusters, config, tolerances)
        solutions.append(ClusterSolution(members, precoder, power))
    return solutions


def evaluate(chan: ChannelRealization, partition: ClusterPartition,
             solutions, config: ScenarioConfig, gamma_db: float,
             quotas: np.ndarray) -> EEReport:
    """Network-level report with actual inter-cluster interference.

    Per-cluster zero-forcing removes intra-cluster terms (up to the pinned
    residual); cross-cluster leakage enters every user's SINR. Consumption is
    assembled per cluster with deployed-network signaling.
    """
    num_ues, num_das = chan.num_ues, chan.num_das
    w_global = np.zeros((num_das, num_ues), dtype=complex)
    p_global = np.zeros(num_ues)
    design_snr = np.zeros(num_ues)
    for sol in solutions:
        for col, u in enumerate(sol.members):
            w_global[:, u] = sol.precoder.w[:, col]
            p_global[u] = sol.power.p[col]
            design_snr[u] = sol.power.p[col] / config.noise_power_w
    effective = chan.composite @ w_global
    received = (np.abs(effective) ** 2) * p_global[None, :]
    signal = np.diag(received).copy()
    interference = received.sum(axis=1) - signal
    sinr = signal / (config.noise_power_w + interference)
    omega = config.bandwidth_hz
    rates = omega * np.log1p(sinr) / LN2
    design_rates = omega * np.log1p(design_snr) / LN2
    dims = [(len(m), len(u)) for m, u in zip(partition.da_sets, partition.clusters)]
    power = network_breakdown(w_global, p_global, dims, num_das, config)
    sum_rate = float(rates.sum())
    return EEReport(
        ee_mbpj=sum_rate / power.total_w / 1e6,
        sum_rate_bps=sum_rate,
        power=power,
        num_clusters=partition.num_clusters,
        outage=False,
        per_ue_rate_bps=rates,
        csi_count=partition.csi_count,
        gamma_db=gamma_db,
        quotas=np.asarray(quotas, dtype=np.int64),
        peak_da_power_w=float(per_da_tx_power(w_global, p_global).max()),
        min_design_rate_bps=float(design_rates.min()),
    )


def _outage(partition: ClusterPartition, config: ScenarioConfig,
            gamma_db: float, quotas) -> EEReport:
    return EEReport(
        ee_mbpj=0.0,
        sum_rate_bps=0.0,
        power=ZERO_BREAKDOWN,
        num_clusters=partition.num_clusters,
        outage=True,
        per_ue_rate_bps=np.zeros(config.num_ues),
        csi_count=partition.csi_count,
        gamma_db=gamma_db,
        quotas=np.asarray(quotas, dtype=np.int64),
        peak_da_power_w=0.0,
        min_design_rate_bps=0.0,
    )


def _weakest_member(chan: ChannelRealization, assignment: SelectionAssignment,
                    members) -> int:
    """Member whose best assigned gain is smallest."""
    best = None
    for u in members:
        peak = float(np.abs(chan.composite[u, list(assignment.assigned[u])]).max())
        if best is None or peak < best[0]:
            best = (peak, u)
    return best[1]


def _solve_lcas(chan: ChannelRealization, config: ScenarioConfig,
                tolerances) -> EEReport:
    assignment = lcas_select(chan.composite)
    partition = ClusterPartition(
        clusters=(tuple(range(config.num_ues)),),
        da_sets=(assignment.assigned[0],),
    )
    solutions = _solve_clusters(chan, partition, config, tolerances)
    gamma = config.clustering_threshold_db
    if not all(s.feasible for s in solutions):
        return _outage(partition, config, gamma, assignment.quotas)
    return evaluate(chan, partition, solutions, config, gamma, assignment.quotas)


def solve_realization(chan: ChannelRealization, config: ScenarioConfig,
                      tolerances=DEFAULT_TOLERANCES) -> EEReport:
    """Solve one realization at the configured threshold.

    Starts every user at one antenna. While any cluster is infeasible and
    spare antennas remain, the weakest member of each failing cluster gets
    one more antenna and selection/clustering rerun, up to the configured
    retry count. Any cluster still infeasible scores the whole realization
    as an outage.
    """
    if config.mode == "lcas":
        return _solve_lcas(chan, config, tolerances)
    gamma_db = config.clustering_threshold_db
    gamma_lin = db_to_linear(gamma_db)
    num_ues, num_das = config.num_ues, config.num_das
    quotas = np.ones(num_ues, dtype=np.int64)
    if config.as_metric == "mdb":
        metric_values = ue_da_distances(chan.ue_positions, chan.da_positions)
    else:
        metric_values = chan.composite
    partition = None
    for round_idx in range(config.max_quota_rounds + 1):
        assignment = greedy_select(metric_values, quotas, config.as_metric)
        table = distance_table(chan, assignment, config)
        partition = cluster(table, gamma_lin, assignment)
        solutions = _solve_clusters(chan, partition, config, tolerances)
        failing = [s for s in solutions if not s.feasible]
        if not failing:
            return evaluate(chan, partition, solutions, config, gamma_db, quotas)
        if round_idx == config.max_quota_rounds:
            break
        grew = False
        for sol in failing:
            if int(quotas.sum()) >= num_das:
                break
            quotas[_weakest_member(chan, assignment, sol.members)] += 1
            grew = True
        if not grew:
            break
    return _outage(partition, config, gamma_db, quotas)


def adapt_gamma(chan: ChannelRealization, config: ScenarioConfig,
                tolerances=DEFAULT_TOLERANCES) -> EEReport:
    """Threshold line search: probe one step up, else one step down, then
    walk in the chosen direction while EE does not degrade.

    The partition only changes when the threshold crosses a pair distance, so
    EE(threshold) is piecewise constant; ties keep the walk moving (a strict
    hill climb would stall on every plateau), while any strict drop stops it.
    The best report seen is returned.
    """
    gamma0 = config.clustering_threshold_db
    if not math.isfinite(gamma0):
        raise ConfigError("threshold adaptation needs a finite starting value")
    delta = config.threshold_step_db

    def solve_at(gamma_db):
        return solve_realization(
            chan, config.replace(clustering_threshold_db=gamma_db), tolerances)

    best = solve_at(gamma0)
    up = solve_at(gamma0 + delta)
    if up.ee_mbpj >= best.ee_mbpj:
        direction, current, ref = 1.0, gamma0 + delta, up.ee_mbpj
        if up.ee_mbpj > best.ee_mbpj:
            best = up
    else:
        down = solve_at(gamma0 - delta)
        if down.ee_mbpj >= best.ee_mbpj:
            direction, current, ref = -1.0, gamma0 - delta, down.ee_mbpj
            if down.ee_mbpj > best.ee_mbpj:
                best = down
        else:
            return best
    for _ in range(config.max_threshold_steps):
        probe_gamma = current + direction * delta
        probe = solve_at(probe_gamma)
        if probe.ee_mbpj < ref:
            break
        if probe.ee_mbpj > best.ee_mbpj:
            best = probe
        current, ref = probe_gamma, probe.ee_mbpj
    return best
