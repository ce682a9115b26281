"""Scenario configuration: physical constants, power-model constants, run controls.

All internal computation uses linear SI units (watts, Hz, bits/s, km).
dB / dBm values appear only at configuration and reporting boundaries.
"""
from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass


class ConfigError(ValueError):
    """Raised when a scenario configuration violates its invariants."""


def dbm_to_watts(x_dbm: float) -> float:
    """Convert a power level in dBm to watts. -inf maps to 0 W."""
    if x_dbm == -math.inf:
        return 0.0
    return 10.0 ** ((x_dbm - 30.0) / 10.0)


def watts_to_dbm(x_w: float) -> float:
    if x_w == 0.0:
        return -math.inf
    return 10.0 * math.log10(x_w) + 30.0


def db_to_linear(x_db: float) -> float:
    """Convert a dB ratio to linear. +/-inf map to inf / 0 (threshold extremes)."""
    if x_db == math.inf:
        return math.inf
    if x_db == -math.inf:
        return 0.0
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x: float) -> float:
    if x == 0.0:
        return -math.inf
    if x == math.inf:
        return math.inf
    return 10.0 * math.log10(x)


@dataclass(frozen=True)
class ScenarioConfig:
    """Full parameter set for one simulated network.

    Defaults are the large-scale distributed-antenna column of the standard
    parameter table (square 1 km^2 cell, 400 antenna ports, 20 users).
    """

    cell_side_km: float = 1.0
    num_das: int = 400
    num_ues: int = 20
    bandwidth_hz: float = 10e6
    target_rate_bps: float = 10e6
    max_da_power_w: float = dbm_to_watts(17.0)
    noise_psd_w_per_hz: float = dbm_to_watts(-174.0)
    antenna_gain_db: float = 5.0
    path_loss_exponent: float = 3.76
    power_loss_coeff: float = 2.63
    pa_efficiency: float = 0.08
    rf_chain_power_w: float = 5.7            # per active antenna port
    fiber_power_w_per_bps: float = 0.5e-12   # per active port, per delivered bit/s
    fixed_power_w: float = 34.0
    proc_power_w_per_hz: float = 0.94e-6     # scales with precoder dimension
    baseband_power_w_per_hz: float = 0.54e-6  # dimension independent
    signaling_power_w_per_hz: float = 50e-9   # per deployed antenna
    processing_exponent: float = 0.5          # MU-processing overhead, in [0, 2]
    clustering_threshold_db: float = 22.0     # may be +/-inf
    max_quota_rounds: int = 5                 # antenna-addition retries
    max_threshold_steps: int = 10             # threshold line-search steps
    threshold_step_db: float = 5.0
    mode: str = "ldas"                        # "ldas" | "lcas"
    as_metric: str = "cgb"                    # "cgb" (gain) | "mdb" (distance)
    power_control: str = "heuristic"          # "heuristic" | "optimal"
    realizations: int = 200
    master_seed: int = 1234

    def __post_init__(self):
        self.validate()

    @property
    def noise_power_w(self) -> float:
        """Integrated noise power sigma^2 = PSD * bandwidth."""
        return self.noise_psd_w_per_hz * self.bandwidth_hz

    @property
    def grid_dim(self) -> int:
        return math.isqrt(self.num_das)

    def validate(self) -> None:
        m, u = self.num_das, self.num_ues
        if m < 1 or math.isqrt(m) ** 2 != m:
            raise ConfigError(f"num_das must be a perfect square, got {m}")
        if u < 1 or m < u:
            raise ConfigError(f"need num_das >= num_ues >= 1, got M={m}, U={u}")
        if not 0.0 < self.pa_efficiency < 1.0:
            raise ConfigError("pa_efficiency must lie in (0, 1)")
        if self.power_loss_coeff <= 1.0:
            raise ConfigError("power_loss_coeff must exceed 1")
        if not 0.0 <= self.processing_exponent <= 2.0:
            raise ConfigError("processing_exponent must lie in [0, 2]")
        if self.bandwidth_hz <= 0.0:
            raise ConfigError("bandwidth_hz must be positive")
        if self.noise_power_w <= 0.0:
            raise ConfigError("noise power must be strictly positive")
        for name in (
            "cell_side_km",
            "target_rate_bps",
            "max_da_power_w",
            "rf_chain_power_w",
            "fiber_power_w_per_bps",
            "fixed_power_w",
            "proc_power_w_per_hz",
            "baseband_power_w_per_hz",
            "signaling_power_w_per_hz",
        ):
            if getattr(self, name) < 0.0:
                raise ConfigError(f"{name} must be nonnegative")
        if self.threshold_step_db <= 0.0:
            raise ConfigError("threshold_step_db must be positive")
        if self.max_quota_rounds < 0 or self.max_threshold_steps < 0:
            raise ConfigError("adaptation limits must be nonnegative")
        if self.mode not in ("ldas", "lcas"):
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.as_metric not in ("cgb", "mdb"):
            raise ConfigError(f"unknown selection metric {self.as_metric!r}")
        if self.power_control not in ("heuristic", "optimal"):
            raise ConfigError(f"unknown power_control {self.power_control!r}")
        if self.realizations < 1:
            raise ConfigError("realizations must be >= 1")
        if self.master_seed < 0:
            raise ConfigError("master_seed must be nonnegative")

    def replace(self, **changes) -> "ScenarioConfig":
        return dataclasses.replace(self, **changes)


def default_ldas(**overrides) -> ScenarioConfig:
    """Distributed-antenna defaults (low-efficiency remote amplifiers, fiber fronthaul)."""
    return ScenarioConfig(**overrides)


def default_lcas(**overrides) -> ScenarioConfig:
    """Colocated-antenna baseline.

    High-efficiency central amplifier (0.6), no per-port fiber cost, and
    signal-processing power raised by 10%.
    """
    base = dict(
        pa_efficiency=0.6,
        fiber_power_w_per_bps=0.0,
        proc_power_w_per_hz=0.94e-6 * 1.1,
        baseband_power_w_per_hz=0.54e-6 * 1.1,
        mode="lcas",
    )
    base.update(overrides)
    return ScenarioConfig(**base)


_INF_STRINGS = {"inf": math.inf, "+inf": math.inf, "-inf": -math.inf,
                "infinity": math.inf, "-infinity": -math.inf}


def _coerce(value):
    if isinstance(value, str) and value.strip().lower() in _INF_STRINGS:
        return _INF_STRINGS[value.strip().lower()]
    return value


def load_config(path: str | None, **overrides) -> ScenarioConfig:
    """Build a config from an optional JSON file plus keyword overrides.

    Every JSON field is optional; unknown fields raise. Overrides win over
    file values. The file may spell infinities as the strings "inf"/"-inf".
    """
    values: dict = {}
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        if not isinstance(raw, dict):
            raise ConfigError("config file must contain a JSON object")
        known = {f.name for f in dataclasses.fields(ScenarioConfig)}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        values.update({k: _coerce(v) for k, v in raw.items()})
    values.update({k: _coerce(v) for k, v in overrides.items() if v is not None})
    mode = values.get("mode", "ldas")
    if mode == "lcas":
        values.pop("mode", None)
        return default_lcas(**values)
    return default_ldas(**values)
