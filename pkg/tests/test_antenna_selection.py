import numpy as np
import pytest

from ldas.antenna_selection import (SelectionInfeasibleError, greedy_select,
                                    lcas_select)


def check_invariants(assignment):
    s = assignment.s_matrix
    assert np.all(s.sum(axis=1) <= 1)              # one user per antenna
    seen = set()
    for u, members in enumerate(assignment.assigned):
        assert len(members) == assignment.quotas[u]
        for m in members:
            assert s[m, u] == 1
            assert m not in seen
            seen.add(m)
    assert s.sum() == len(seen)


def test_single_pair():
    a = greedy_select(np.array([[0.7]]), [1], "cgb")
    assert a.s_matrix[0, 0] == 1
    assert a.assigned == ((0,),)


def test_cgb_hand_trace():
    mags = np.array([[0.9, 0.5, 0.1],
                     [0.8, 0.7, 0.2]])
    a = greedy_select(mags, [1, 1], "cgb")
    assert a.assigned == ((0,), (1,))
    check_invariants(a)


def test_cgb_uses_magnitudes_not_phases():
    rng = np.random.default_rng(0)
    h = rng.standard_normal((4, 12)) + 1j * rng.standard_normal((4, 12))
    phases = np.exp(1j * rng.uniform(0, 2 * np.pi, size=h.shape))
    a = greedy_select(h, [2, 1, 1, 3], "cgb")
    b = greedy_select(h * phases, [2, 1, 1, 3], "cgb")
    assert np.array_equal(a.s_matrix, b.s_matrix)


def test_monotone_transform_invariance():
    rng = np.random.default_rng(1)
    h = np.abs(rng.standard_normal((3, 9))) + 0.1
    a = greedy_select(h, [2, 2, 2], "cgb")
    b = greedy_select(h ** 3 * 7.5, [2, 2, 2], "cgb")   # monotone on positives
    assert np.array_equal(a.s_matrix, b.s_matrix)


def test_mdb_prefers_small_distance():
    d = np.array([[0.5, 0.1, 0.9],
                  [0.2, 0.6, 0.3]])
    a = greedy_select(d, [1, 1], "mdb")
    assert a.assigned == ((1,), (0,))


def test_mdb_tie_breaks_to_lowest_antenna_index():
    # colocated geometry: every antenna equidistant for each user
    d = np.array([[2.0, 2.0, 2.0, 2.0],
                  [1.0, 1.0, 1.0, 1.0]])
    a = greedy_select(d, [1, 1], "mdb")
    assert a.assigned[1] == (0,)    # user 1 is globally closest, takes antenna 0
    assert a.assigned[0] == (1,)    # next lowest index for the tied user 0


def test_quota_above_antenna_count_rejected():
    with pytest.raises(SelectionInfeasibleError):
        greedy_select(np.ones((2, 3)), [2, 2], "cgb")


def test_nonfinite_metric_rejected():
    with pytest.raises(ValueError):
        greedy_select(np.array([[np.nan, 1.0]]), [1], "cgb")


def test_quota_filled_exactly_random():
    rng = np.random.default_rng(2)
    for _ in range(20):
        u = int(rng.integers(1, 6))
        m = int(rng.integers(u, 40))
        quotas = np.ones(u, dtype=int)
        budget = m - u
        for k in range(u):
            extra = int(rng.integers(0, budget + 1))
            quotas[k] += extra
            budget -= extra
        h = rng.standard_normal((u, m)) + 1j * rng.standard_normal((u, m))
        check_invariants(greedy_select(h, quotas, "cgb"))


def test_lcas_all_antennas_when_counts_match():
    rng = np.random.default_rng(3)
    h = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    a = lcas_select(h)
    assert a.shared
    assert a.assigned[0] == (0, 1, 2)


def test_lcas_keeps_largest_column_power():
    h = np.array([[np.sqrt(3.0), 1.0, 2.0, np.sqrt(2.0)],
                  [0.0, 0.0, 0.0, 0.0]])
    a = lcas_select(h)
    # column powers 3, 1, 4, 2 -> antennas 2 and 0
    assert a.assigned[0] == (0, 2)
    assert np.array_equal(np.nonzero(a.s_matrix[:, 0])[0], [0, 2])


def test_lcas_scale_invariant():
    rng = np.random.default_rng(4)
    h = rng.standard_normal((2, 6)) + 1j * rng.standard_normal((2, 6))
    assert lcas_select(h).assigned == lcas_select(2.0 * h).assigned
