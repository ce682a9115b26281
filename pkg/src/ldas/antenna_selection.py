"""Greedy antenna selection: gain-based and distance-based pairing.

Sorts all (antenna, user) candidate pairs once by the metric and sweeps
linearly, honoring per-user quotas; ties break toward the lower antenna
index, then the lower user index.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels


class SelectionInfeasibleError(ValueError):
    """Requested quotas cannot be met with the deployed antennas."""


@dataclass(frozen=True)
class SelectionAssignment:
    s_matrix: np.ndarray          # (M, U) binary
    assigned: tuple               # per-UE tuples of antenna indices
    quotas: np.ndarray            # per-UE target counts
    shared: bool = False          # True when all UEs share one antenna set

    @property
    def num_das(self) -> int:
        return self.s_matrix.shape[0]

    @property
    def num_ues(self) -> int:
        return self.s_matrix.shape[1]

    def active_antennas(self) -> np.ndarray:
        return np.nonzero(self.s_matrix.max(axis=1) > 0)[0]


def _owner_to_assignment(owner: np.ndarray, num_das: int, num_ues: int,
                         quotas: np.ndarray) -> SelectionAssignment:
    s = np.zeros((num_das, num_ues), dtype=np.int8)
    assigned = [[] for _ in range(num_ues)]
    for m in range(num_das):
        u = int(owner[m])
        if u >= 0:
            s[m, u] = 1
            assigned[u].append(m)
    return SelectionAssignment(
        s_matrix=s,
        assigned=tuple(tuple(a) for a in assigned),
        quotas=np.asarray(quotas, dtype=np.int64),
    )


def greedy_select(values: np.ndarray, quotas, metric: str = "cgb") -> SelectionAssignment:
    """Assign antennas to users greedily by the chosen metric.

    values is (U, M): the channel matrix for metric "cgb" (largest magnitude
    wins; phases are ignored) or a distance matrix for "mdb" (smallest wins).
    """
    values = np.asarray(values)
    num_ues, num_das = values.shape
    quotas = np.asarray(quotas, dtype=np.int64)
    if quotas.shape != (num_ues,) or np.any(quotas < 1):
        raise ValueError("quotas must give a positive count per user")
    if int(quotas.sum()) > num_das:
        raise SelectionInfeasibleError(
            f"quota sum {int(quotas.sum())} exceeds antenna count {num_das}")
    if metric == "cgb":
        key = -np.abs(values)
    elif metric == "mdb":
        key = np.asarray(values, dtype=float)
    else:
        raise ValueError(f"unknown metric {metric!r}")
    if not np.all(np.isfinite(key)):
        raise ValueError("selection metric must be finite")

    ue_idx = np.repeat(np.arange(num_ues, dtype=np.int64), num_das)
    da_idx = np.tile(np.arange(num_das, dtype=np.int64), num_ues)
    order = np.lexsort((ue_idx, da_idx, key.ravel()))
    owner = kernels.greedy_sweep(da_idx[order], ue_idx[order], quotas,
                                 num_das, num_ues)
    return _owner_to_assignment(owner, num_das, num_ues, quotas)


def lcas_select(channel: np.ndarray) -> SelectionAssignment:
    """Colocated baseline: keep the U antennas with the largest summed gain.

    All users share the selected set (joint MU representation, so the
    one-user-per-antenna rule of greedy_select does not apply here).
    """
    channel = np.asarray(channel)
    num_ues, num_das = channel.shape
    col_power = np.sum(np.abs(channel) ** 2, axis=0)
    order = np.lexsort((np.arange(num_das), -col_power))
    chosen = np.sort(order[:num_ues])
    s = np.zeros((num_das, num_ues), dtype=np.int8)
    s[chosen, :] = 1
    shared_set = tuple(int(m) for m in chosen)
    return SelectionAssignment(
        s_matrix=s,
        assigned=tuple(shared_set for _ in range(num_ues)),
        quotas=np.full(num_ues, len(shared_set), dtype=np.int64),
        shared=True,
    )
