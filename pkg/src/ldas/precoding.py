"""Per-cluster zero-forcing precoding via a rank-revealing pseudo-inverse."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import DEFAULT_TOLERANCES


class PrecoderInfeasibleError(RuntimeError):
    """Channel too small or too ill-conditioned to zero-force the cluster."""


@dataclass(frozen=True)
class ClusterPrecoder:
    w: np.ndarray               # (M, U_l), rows zero outside the active set
    effective: np.ndarray       # (U_l, U_l) = H_l S^d W, identity up to residual
    residual: float             # ||H S W - I||_F
    active: tuple               # antenna indices carrying nonzero rows
    column_power: np.ndarray    # per-user squared column norms over active rows


def pseudo_inverse(x: np.ndarray, cutoff: float = DEFAULT_TOLERANCES.singular_cutoff):
    """Moore-Penrose pseudo-inverse by SVD with a relative singular-value cutoff.

    Returns (pinv, effective_rank). Singular values below cutoff * s_max are
    treated as zero.
    """
    x = np.asarray(x)
    if x.size == 0:
        return np.zeros(x.shape[::-1], dtype=complex), 0
    u, s, vh = np.linalg.svd(x, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros(x.shape[::-1], dtype=x.dtype), 0
    keep = s > cutoff * s[0]
    rank = int(np.count_nonzero(keep))
    inv_s = np.zeros_like(s)
    inv_s[keep] = 1.0 / s[keep]
    return (vh.conj().T * inv_s) @ u.conj().T, rank


def zf_precoder(cluster_rows: np.ndarray, active, tolerances=DEFAULT_TOLERANCES) -> ClusterPrecoder:
    """Zero-forcing precoder for one cluster.

    cluster_rows is the (U_l, M) channel of the cluster's users; active lists
    the antenna indices the cluster may use. The restricted channel must have
    full row rank with at least as many antennas as users; otherwise the
    cluster is flagged infeasible (the caller may then assign more antennas).
    """
    h = np.asarray(cluster_rows)
    num_ues, num_das = h.shape
    active = np.asarray(sorted(int(a) for a in active), dtype=np.int64)
    if active.size < num_ues:
        raise PrecoderInfeasibleError(
            f"cluster has {active.size} antennas for {num_ues} users")
    h_act = h[:, active]
    w_act, rank = pseudo_inverse(h_act, cutoff=tolerances.singular_cutoff)
    if rank < num_ues:
        raise PrecoderInfeasibleError(
            f"restricted channel rank {rank} below user count {num_ues}")
    w = np.zeros((num_das, num_ues), dtype=complex)
    w[active, :] = w_act
    effective = h_act @ w_act
    residual = float(np.linalg.norm(effective - np.eye(num_ues)))
    limit = (tolerances.zf_residual
             * float(np.linalg.norm(w_act)) * float(np.linalg.norm(h_act)))
    if residual > max(limit, 1e-300):
        raise PrecoderInfeasibleError(
            f"zero-forcing residual {residual:.3e} exceeds {limit:.3e}")
    column_power = np.sum(np.abs(w_act) ** 2, axis=0)
    return ClusterPrecoder(
        w=w,
        effective=effective,
        residual=residual,
        active=tuple(int(a) for a in active),
        column_power=column_power,
    )
