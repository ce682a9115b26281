"""Interference-based user clustering.

The distance between two users is the worse of the two directed SINRs each
would see at full per-antenna power through its own assigned set, with the
other's set as interference. Single-linkage agglomeration merges clusters
while the closest pair falls below the threshold.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .antenna_selection import SelectionAssignment
from .channel import ChannelRealization
from .scenario import ScenarioConfig


@dataclass(frozen=True)
class ClusterPartition:
    clusters: tuple      # per-cluster tuples of UE indices
    da_sets: tuple       # per-cluster tuples of antenna indices

    @property
    def num_clusters(self) -> int:
        return len(self.clusters)

    @property
    def csi_count(self) -> int:
        """Complex values fed back: sum over clusters of ports x users."""
        return sum(len(m) * len(u) for m, u in zip(self.da_sets, self.clusters))

    def to_lists(self) -> dict:
        """JSON-friendly fixture form."""
        return {
            "clusters": [list(c) for c in self.clusters],
            "da_sets": [list(m) for m in self.da_sets],
        }


def directed_sinr_table(chan: ChannelRealization, assignment: SelectionAssignment,
                        config: ScenarioConfig) -> np.ndarray:
    """directed[u, v] = own-set power of u over (noise + power from v's set)."""
    gains = np.abs(chan.composite) ** 2
    indicator = assignment.s_matrix.T.astype(float)
    received = config.max_da_power_w * (gains @ indicator.T)  # (U, U)
    own = np.diag(received)
    return own[:, None] / (config.noise_power_w + received)


def pair_distance(u: int, v: int, chan: ChannelRealization,
                  assignment: SelectionAssignment, config: ScenarioConfig) -> float:
    """Symmetric pairwise metric: min of the two directed SINRs (linear)."""
    for w in (u, v):
        if len(assignment.assigned[w]) == 0:
            raise ValueError(f"UE {w} has no assigned antennas")
    gains = np.abs(chan.composite) ** 2
    p = config.max_da_power_w
    sigma2 = config.noise_power_w
    own_u = p * gains[u, list(assignment.assigned[u])].sum()
    own_v = p * gains[v, list(assignment.assigned[v])].sum()
    cross_uv = p * gains[u, list(assignment.assigned[v])].sum()
    cross_vu = p * gains[v, list(assignment.assigned[u])].sum()
    return min(own_u / (sigma2 + cross_uv), own_v / (sigma2 + cross_vu))


def distance_table(chan: ChannelRealization, assignment: SelectionAssignment,
                   config: ScenarioConfig) -> np.ndarray:
    """Full pairwise distance matrix; diagonal set to +inf."""
    directed = directed_sinr_table(chan, assignment, config)
    d = np.minimum(directed, directed.T)
    np.fill_diagonal(d, math.inf)
    return d


def cluster(distances: np.ndarray, gamma_linear: float,
            assignment: SelectionAssignment) -> ClusterPartition:
    """Single-linkage agglomeration from singletons.

    Merges the closest pair while its distance is strictly below the
    threshold; distance ties break toward the lowest cluster-index pair.
    Cluster antenna sets are the unions of their members' assigned sets.
    """
    num_ues = distances.shape[0]
    clusters = [[u] for u in range(num_ues)]
    while len(clusters) > 1:
        best = math.inf
        best_pair = None
        for i in range(len(clusters)):
            for j in range(i + 1, len(clusters)):
                d = distances[np.ix_(clusters[i], clusters[j])].min()
                if d < best:
                    best = d
                    best_pair = (i, j)
        if best_pair is None or not best < gamma_linear:
            break
        i, j = best_pair
        clusters[i] = sorted(clusters[i] + clusters[j])
        del clusters[j]
    da_sets = []
    for members in clusters:
        union: set = set()
        for u in members:
            union.update(assignment.assigned[u])
        da_sets.append(tuple(sorted(union)))
    return ClusterPartition(
        clusters=tuple(tuple(c) for c in clusters),
        da_sets=tuple(da_sets),
    )
