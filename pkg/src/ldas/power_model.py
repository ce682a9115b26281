"""Transmit-power-dependent and -independent consumption models.

Network consumption splits into a TPD term (amplifier draw, scaled by the
power-loss coefficient over PA efficiency) and TPI terms: per-active-port RF
circuitry, precoder-dimension-dependent signal processing, per-deployed-port
channel-estimation signaling, and a fixed floor.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .scenario import ScenarioConfig


@dataclass(frozen=True)
class PowerBreakdown:
    tpd_w: float
    rf_circuit_w: float
    signal_processing_w: float
    signaling_w: float
    fixed_w: float
    total_w: float


def breakdown(tpd: float, rf: float, sp: float, sig: float, fixed: float) -> PowerBreakdown:
    """Assemble a PowerBreakdown; summation order is fixed so totals are exact."""
    total = ((((tpd + rf) + sp) + sig) + fixed)
    return PowerBreakdown(tpd, rf, sp, sig, fixed, total)


ZERO_BREAKDOWN = breakdown(0.0, 0.0, 0.0, 0.0, 0.0)


def per_da_tx_power(sw: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Average transmit power of each antenna: diag((S.W) P (S.W)^H).

    sw is the masked precoder (rows zero outside the active set), p the
    per-user effective power vector (diagonal of P).
    """
    p = np.asarray(p, dtype=float)
    if np.any(p < 0.0):
        raise ValueError("power allocation must be nonnegative")
    return np.abs(sw) ** 2 @ p


def tpd_power(sw: np.ndarray, p: np.ndarray, config: ScenarioConfig) -> float:
    """Amplifier draw: (c / eta) * sum of per-antenna transmit powers."""
    scale = config.power_loss_coeff / config.pa_efficiency
    return scale * float(per_da_tx_power(sw, p).sum())


def tpi_power(s_matrix: np.ndarray, num_precoder_columns: int,
              config: ScenarioConfig, target_rates=None) -> PowerBreakdown:
    """Network TPI terms for a binary selection matrix S (M x U).

    A port contributes RF-circuit power only when active for some user; the
    processing term grows as (precoder columns)^(exponent+1); signaling scales
    with the number of deployed ports.
    """
    s = np.asarray(s_matrix)
    num_deployed = s.shape[0]
    active = int(np.count_nonzero(s.max(axis=1) > 0)) if s.size else 0
    if target_rates is None:
        target_rates = np.full(s.shape[1], config.target_rate_bps)
    rate_sum = float(np.sum(target_rates))
    rf = active * (config.rf_chain_power_w + config.fiber_power_w_per_bps * rate_sum)
    omega = config.bandwidth_hz
    sp = (omega * config.proc_power_w_per_hz
          * float(num_precoder_columns) ** (config.processing_exponent + 1.0)
          + omega * config.baseband_power_w_per_hz)
    sig = num_deployed * omega * config.signaling_power_w_per_hz
    return breakdown(0.0, rf, sp, sig, config.fixed_power_w)


def cluster_tpi_cost(num_active_das: int, num_cluster_ues: int,
                     num_clusters: int, config: ScenarioConfig) -> float:
    """TPI share charged to one cluster.

    RF-circuit and signaling terms follow the cluster's own ports; the
    dimension-independent processing term and the fixed floor are split
    evenly across the clusters.
    """
    if num_clusters < 1:
        raise ValueError("cluster count must be positive")
    omega = config.bandwidth_hz
    rate_sum = num_cluster_ues * config.target_rate_bps
    rf = num_active_das * (config.rf_chain_power_w
                           + config.fiber_power_w_per_bps * rate_sum)
    sp = (omega * config.proc_power_w_per_hz
          * float(num_cluster_ues) ** (config.processing_exponent + 1.0))
    sig = num_active_das * omega * config.signaling_power_w_per_hz
    shared = (omega * config.baseband_power_w_per_hz + config.fixed_power_w) / num_clusters
    return rf + sp + sig + shared


def cluster_cost(sw: np.ndarray, p: np.ndarray, num_active_das: int,
                 num_cluster_ues: int, num_clusters: int,
                 config: ScenarioConfig) -> float:
    """Total per-cluster consumption: TPD over the cluster's ports plus its TPI share."""
    return tpd_power(sw, p, config) + cluster_tpi_cost(
        num_active_das, num_cluster_ues, num_clusters, config)


def network_breakdown(sw: np.ndarray, p: np.ndarray, cluster_dims,
                      num_deployed_das: int, config: ScenarioConfig) -> PowerBreakdown:
    """Network-level consumption given the assembled precoder and cluster layout.

    cluster_dims is a sequence of (active ports, users) pairs. Processing
    power follows the per-cluster precoder dimensions; signaling uses the
    deployed-network convention (all ports are channel-estimated).
    """
    tpd = tpd_power(sw, p, config)
    omega = config.bandwidth_hz
    rf = 0.0
    sp_dim = 0.0
    for n_das, n_ues in cluster_dims:
        rate_sum = n_ues * config.target_rate_bps
        rf += n_das * (config.rf_chain_power_w
                       + config.fiber_power_w_per_bps * rate_sum)
        sp_dim += float(n_ues) ** (config.processing_exponent + 1.0)
    sp = omega * config.proc_power_w_per_hz * sp_dim + omega * config.baseband_power_w_per_hz
    sig = num_deployed_das * omega * config.signaling_power_w_per_hz
    return breakdown(tpd, rf, sp, sig, config.fixed_power_w)
