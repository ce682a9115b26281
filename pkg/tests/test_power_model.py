import numpy as np
import pytest

from ldas.power_model import (breakdown, cluster_cost, cluster_tpi_cost,
                              network_breakdown, per_da_tx_power, tpd_power,
                              tpi_power)
from ldas.scenario import default_ldas


def test_breakdown_total_is_exact_sum():
    bd = breakdown(1.25, 2.5, 3.125, 0.375, 34.0)
    assert bd.total_w == ((((1.25 + 2.5) + 3.125) + 0.375) + 34.0)


def test_tpd_zero_power():
    cfg = default_ldas()
    sw = np.ones((4, 2), dtype=complex)
    assert tpd_power(sw, np.zeros(2), cfg) == 0.0


def test_tpd_single_antenna_value():
    cfg = default_ldas()
    sw = np.array([[np.sqrt(0.5)]], dtype=complex)   # |w|^2 = 0.5
    p = np.array([0.1])                              # |w|^2 p = 0.05 W
    assert tpd_power(sw, p, cfg) == pytest.approx(2.63 * 0.05 / 0.08)


def test_tpd_column_permutation_invariant():
    cfg = default_ldas()
    rng = np.random.default_rng(0)
    sw = rng.standard_normal((6, 3)) + 1j * rng.standard_normal((6, 3))
    p = rng.uniform(0.0, 1e-3, size=3)
    perm = [2, 0, 1]
    assert tpd_power(sw, p, cfg) == pytest.approx(
        tpd_power(sw[:, perm], p[perm], cfg))


def test_tpd_linear_in_power():
    cfg = default_ldas()
    rng = np.random.default_rng(1)
    sw = rng.standard_normal((5, 2)) + 1j * rng.standard_normal((5, 2))
    p = rng.uniform(0.0, 1e-3, size=2)
    assert tpd_power(sw, 2.0 * p, cfg) == pytest.approx(2.0 * tpd_power(sw, p, cfg))


def test_tpd_rejects_negative_power():
    cfg = default_ldas()
    with pytest.raises(ValueError):
        per_da_tx_power(np.ones((2, 1), dtype=complex), np.array([-1e-6]))


def test_tpi_no_active_antennas():
    cfg = default_ldas()
    s = np.zeros((8, 3), dtype=np.int8)
    bd = tpi_power(s, 3, cfg)
    assert bd.rf_circuit_w == 0.0
    assert bd.fixed_w == 34.0


def test_tpi_single_active_antenna_value():
    cfg = default_ldas(num_das=4, num_ues=1)
    s = np.zeros((4, 1), dtype=np.int8)
    s[2, 0] = 1
    bd = tpi_power(s, 1, cfg)
    assert bd.rf_circuit_w == pytest.approx(5.7 + 0.5e-12 * 1e7)  # 5.700005 W


def test_tpi_no_mu_overhead_when_exponent_zero():
    # four single-user chains and one 4-column precoder cost the same
    cfg = default_ldas(processing_exponent=0.0)
    s = np.zeros((10, 4), dtype=np.int8)
    bd4 = tpi_power(s, 4, cfg)
    omega = cfg.bandwidth_hz
    assert bd4.signal_processing_w == pytest.approx(
        omega * cfg.proc_power_w_per_hz * 4 + omega * cfg.baseband_power_w_per_hz)


def test_tpi_signaling_scales_with_deployment():
    cfg = default_ldas(num_das=400, num_ues=20)
    s = np.zeros((400, 20), dtype=np.int8)
    bd = tpi_power(s, 20, cfg)
    assert bd.signaling_w == pytest.approx(400 * cfg.bandwidth_hz * 50e-9)  # 200 W


def test_cluster_cost_su_reference_value():
    # one single-user cluster, one active antenna, zero transmit power
    cfg = default_ldas(processing_exponent=0.5)
    sw = np.zeros((1, 1), dtype=complex)
    cost = cluster_cost(sw, np.zeros(1), num_active_das=1, num_cluster_ues=1,
                        num_clusters=1, config=cfg)
    assert cost == pytest.approx(5.700005 + 9.4 + 5.4 + 0.5 + 34.0)


def test_cluster_cost_shared_terms_split_by_cluster_count():
    cfg = default_ldas()
    one = cluster_tpi_cost(1, 1, 1, cfg)
    two = cluster_tpi_cost(1, 1, 2, cfg)
    shared = cfg.bandwidth_hz * cfg.baseband_power_w_per_hz + cfg.fixed_power_w
    assert one - two == pytest.approx(shared / 2.0)


def test_cluster_cost_requires_positive_cluster_count():
    cfg = default_ldas()
    with pytest.raises(ValueError):
        cluster_tpi_cost(1, 1, 0, cfg)


def test_single_cluster_cost_equals_network_cost_up_to_signaling():
    cfg = default_ldas(num_das=25, num_ues=4)
    rng = np.random.default_rng(2)
    sw = np.zeros((25, 4), dtype=complex)
    active = [1, 5, 7, 9]
    sw[active, :] = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    p = rng.uniform(0, 1e-3, size=4)
    cost_cluster = cluster_cost(sw, p, 4, 4, 1, cfg)
    bd = network_breakdown(sw, p, [(4, 4)], 25, cfg)
    sig_gap = (25 - 4) * cfg.bandwidth_hz * cfg.signaling_power_w_per_hz
    assert bd.total_w - cost_cluster == pytest.approx(sig_gap)


def test_cluster_sum_below_network_cost():
    # signaling over deployed antennas dominates the per-cluster convention
    cfg = default_ldas(num_das=100, num_ues=6)
    rng = np.random.default_rng(3)
    sw = np.zeros((100, 6), dtype=complex)
    sw[rng.choice(100, 6, replace=False), :] = rng.standard_normal((6, 6))
    p = rng.uniform(0, 1e-3, size=6)
    dims = [(3, 3), (3, 3)]
    total_clusters = (
        cluster_cost(sw[:, :3], p[:3], 3, 3, 2, cfg)
        + cluster_cost(sw[:, 3:], p[3:], 3, 3, 2, cfg))
    bd = network_breakdown(sw, p, dims, 100, cfg)
    assert total_clusters <= bd.total_w + 1e-9


def test_network_breakdown_component_assembly():
    cfg = default_ldas(num_das=16, num_ues=4, processing_exponent=1.0)
    sw = np.zeros((16, 4), dtype=complex)
    p = np.zeros(4)
    bd = network_breakdown(sw, p, [(2, 2), (2, 2)], 16, cfg)
    omega = cfg.bandwidth_hz
    assert bd.tpd_w == 0.0
    assert bd.rf_circuit_w == pytest.approx(4 * (5.7 + 0.5e-12 * 2 * 1e7))
    assert bd.signal_processing_w == pytest.approx(
        omega * cfg.proc_power_w_per_hz * (4.0 + 4.0)
        + omega * cfg.baseband_power_w_per_hz)
    assert bd.signaling_w == pytest.approx(16 * omega * 50e-9)
    assert bd.fixed_w == 34.0
