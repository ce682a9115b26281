"""Geometry, path loss, small-scale fading, and the composite channel matrix."""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .scenario import ConfigError, ScenarioConfig

# Minimum UE-antenna distance (km). Keeps the path-loss law bounded when a
# user is dropped on top of a port.
MIN_DISTANCE_KM = 1e-3


@dataclass(frozen=True)
class ChannelRealization:
    """One network drop: positions, linear path gains, fading, composite channel.

    composite[u, m] = sqrt(path_gain[u, m]) * fading[u, m]
    """

    da_positions: np.ndarray   # (M, 2) km
    ue_positions: np.ndarray   # (U, 2) km
    path_gain: np.ndarray      # (U, M) linear power gain
    fading: np.ndarray         # (U, M) complex, unit variance
    composite: np.ndarray      # (U, M) complex
    iad_km: float

    @property
    def num_das(self) -> int:
        return self.da_positions.shape[0]

    @property
    def num_ues(self) -> int:
        return self.ue_positions.shape[0]


def grid_layout(config: ScenarioConfig) -> np.ndarray:
    """Uniform sqrt(M) x sqrt(M) grid of antenna positions, cell-centered.

    Spacing is cell_side/sqrt(M) with a half-spacing offset from the edges.
    """
    m = config.num_das
    n = config.grid_dim
    if n * n != m:
        raise ConfigError(f"grid layout needs a perfect-square antenna count, got {m}")
    iad = config.cell_side_km / n
    coords = (np.arange(n) + 0.5) * iad
    xx, yy = np.meshgrid(coords, coords, indexing="ij")
    return np.column_stack([xx.ravel(), yy.ravel()])


def colocated_layout(config: ScenarioConfig) -> np.ndarray:
    """All antennas at the cell center (colocated baseline)."""
    center = config.cell_side_km / 2.0
    return np.full((config.num_das, 2), center, dtype=float)


def path_gain_db(distance_km, config: ScenarioConfig):
    """Distance-based power gain in dB: gain - 128 - 10*mu*log10(d[km]).

    Distances are clamped below at MIN_DISTANCE_KM.
    """
    d = np.maximum(np.asarray(distance_km, dtype=float), MIN_DISTANCE_KM)
    return config.antenna_gain_db - 128.0 - 10.0 * config.path_loss_exponent * np.log10(d)


def ue_da_distances(ue_positions: np.ndarray, da_positions: np.ndarray) -> np.ndarray:
    """(U, M) Euclidean distance matrix in km."""
    diff = ue_positions[:, None, :] - da_positions[None, :, :]
    return np.sqrt(np.sum(diff * diff, axis=2))


def draw_realization(config: ScenarioConfig, seed) -> ChannelRealization:
    """Draw one deterministic channel realization for the given seed.

    UE positions are i.i.d. uniform over the cell; fading entries are i.i.d.
    circular-symmetric complex Gaussian with unit variance. Draw order is
    fixed (positions first, then fading) so a seed pins the whole realization.
    """
    rng = np.random.default_rng(seed)
    if config.mode == "lcas":
        da_pos = colocated_layout(config)
        iad = 0.0
    else:
        da_pos = grid_layout(config)
        iad = config.cell_side_km / config.grid_dim
    u, m = config.num_ues, config.num_das
    ue_pos = rng.uniform(0.0, config.cell_side_km, size=(u, 2))
    re = rng.standard_normal((u, m))
    im = rng.standard_normal((u, m))
    fading = (re + 1j * im) / np.sqrt(2.0)
    dist = ue_da_distances(ue_pos, da_pos)
    gain = 10.0 ** (path_gain_db(dist, config) / 10.0)
    composite = np.sqrt(gain) * fading
    return ChannelRealization(
        da_positions=da_pos,
        ue_positions=ue_pos,
        path_gain=gain,
        fading=fading,
        composite=composite,
        iad_km=iad,
    )


def dump_realization(chan: ChannelRealization, path: str) -> None:
    """Write a realization to JSON (complex values as [re, im] pairs)."""
    payload = {
        "da_positions": chan.da_positions.tolist(),
        "ue_positions": chan.ue_positions.tolist(),
        "path_gain": chan.path_gain.tolist(),
        "fading": np.stack([chan.fading.real, chan.fading.imag], axis=-1).tolist(),
        "iad_km": chan.iad_km,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)


def load_realization(path: str) -> ChannelRealization:
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    gain = np.asarray(payload["path_gain"], dtype=float)
    fad = np.asarray(payload["fading"], dtype=float)
    fading = fad[..., 0] + 1j * fad[..., 1]
    return ChannelRealization(
        da_positions=np.asarray(payload["da_positions"], dtype=float),
        ue_positions=np.asarray(payload["ue_positions"], dtype=float),
        path_gain=gain,
        fading=fading,
        composite=np.sqrt(gain) * fading,
        iad_km=float(payload["iad_km"]),
    )
