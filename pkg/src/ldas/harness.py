"""Monte Carlo driver: parameter sweeps, aggregation, CSV/JSON emission.

Per-realization seeds derive from (master seed, realization index), so
results are identical for any worker count and sweep points share channel
draws (paired comparisons across the swept axis).
"""
from __future__ import annotations

import concurrent.futures
import json
import math
from dataclasses import dataclass

import numpy as np

from .channel import draw_realization
from .numerics import DEFAULT_TOLERANCES
from .pipeline import EEReport, adapt_gamma, solve_realization
from .scenario import ConfigError, ScenarioConfig

SWEEP_AXES = ("gamma", "num_ues", "num_das", "beta", "p_sig")

CSV_COLUMNS = ("swept_value", "mean_ee_mbpj", "se_ee", "outage_rate", "mean_L",
               "mean_rate_bps", "tpd_w", "a_w", "b_w", "c_w", "fix_w", "n")


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    values: tuple

    def __post_init__(self):
        if self.axis not in SWEEP_AXES:
            raise ConfigError(f"unknown sweep axis {self.axis!r}; choose from {SWEEP_AXES}")
        if not self.values:
            raise ConfigError("sweep needs at least one value")


@dataclass(frozen=True)
class AggregateRow:
    swept_value: float
    mean_ee_mbpj: float
    se_ee: float
    outage_rate: float
    mean_L: float
    mean_rate_bps: float
    tpd_w: float
    a_w: float
    b_w: float
    c_w: float
    fix_w: float
    n: int

    def as_tuple(self):
        return (self.swept_value, self.mean_ee_mbpj, self.se_ee,
                self.outage_rate, self.mean_L, self.mean_rate_bps,
                self.tpd_w, self.a_w, self.b_w, self.c_w, self.fix_w, self.n)


def parse_sweep(text: str) -> SweepSpec:
    """Parse "axis=v1,v2,..." or "axis=start:stop:step" (stop inclusive)."""
    if "=" not in text:
        raise ConfigError(f"sweep must look like axis=values, got {text!r}")
    axis, _, body = text.partition("=")
    axis = axis.strip()
    body = body.strip()
    if ":" in body:
        parts = body.split(":")
        if len(parts) != 3:
            raise ConfigError(f"range sweep must be start:stop:step, got {body!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise ConfigError("sweep step must be positive")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        values = tuple(start + k * step for k in range(max(count, 1)))
    else:
        values = tuple(float(tok) for tok in body.split(",") if tok.strip())
    return SweepSpec(axis=axis, values=values)


def apply_axis(config: ScenarioConfig, axis: str, value: float) -> ScenarioConfig:
    if axis == "gamma":
        return config.replace(clustering_threshold_db=float(value))
    if axis == "beta":
        return config.replace(processing_exponent=float(value))
    if axis == "p_sig":
        return config.replace(signaling_power_w_per_hz=float(value))
    if axis in ("num_ues", "num_das"):
        iv = int(round(value))
        if iv != value:
            raise ConfigError(f"{axis} sweep values must be integers, got {value}")
        return config.replace(**{axis: iv})
    raise ConfigError(f"unknown sweep axis {axis!r}")


def realization_seed(master_seed: int, index: int):
    return [int(master_seed), int(index)]


def _run_one(task) -> EEReport:
    config, seed, adapt = task
    chan = draw_realization(config, seed)
    if adapt:
        return adapt_gamma(chan, config, DEFAULT_TOLERANCES)
    return solve_realization(chan, config, DEFAULT_TOLERANCES)


def run_reports(config: ScenarioConfig, adapt: bool = False,
                threads: int = 1) -> list[EEReport]:
    """All realizations for one parameter point, in realization order."""
    tasks = [(config, realization_seed(config.master_seed, i), adapt)
             for i in range(config.realizations)]
    if threads <= 1:
        return [_run_one(t) for t in tasks]
    with concurrent.futures.ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(_run_one, tasks, chunksize=max(1, len(tasks) // (4 * threads))))


def _mean(values) -> float:
    values = list(values)
    return math.fsum(values) / len(values) if values else 0.0


def aggregate(reports, swept_value: float) -> AggregateRow:
    """Mean/SE over realizations; exact summation, so permutation-invariant.

    Outage samples enter the EE and rate means as zeros; power components
    average over the non-outage samples only.
    """
    n = len(reports)
    ee = [r.ee_mbpj for r in reports]
    mean_ee = _mean(ee)
    if n > 1:
        var = math.fsum((x - mean_ee) ** 2 for x in ee) / (n - 1)
        se = math.sqrt(var / n)
    else:
        se = 0.0
    ok = [r for r in reports if not r.outage]
    return AggregateRow(
        swept_value=float(swept_value),
        mean_ee_mbpj=mean_ee,
        se_ee=se,
        outage_rate=_mean(1.0 if r.outage else 0.0 for r in reports),
        mean_L=_mean(r.num_clusters for r in reports),
        mean_rate_bps=_mean(r.sum_rate_bps for r in reports),
        tpd_w=_mean(r.power.tpd_w for r in ok),
        a_w=_mean(r.power.rf_circuit_w for r in ok),
        b_w=_mean(r.power.signal_processing_w for r in ok),
        c_w=_mean(r.power.signaling_w for r in ok),
        fix_w=_mean(r.power.fixed_w for r in ok),
        n=n,
    )


def run_sweep(config: ScenarioConfig, sweep: SweepSpec, adapt: bool = False,
              threads: int = 1) -> list[AggregateRow]:
    """One aggregate row per swept value; deterministic for a master seed."""
    points = [apply_axis(config, sweep.axis, v) for v in sweep.values]  # fail fast
    rows = []
    for value, point in zip(sweep.values, points):
        reports = run_reports(point, adapt=adapt, threads=threads)
        rows.append(aggregate(reports, value))
    return rows


def _fmt(value) -> str:
    return repr(int(value)) if isinstance(value, (int, np.integer)) else repr(float(value))


def emit(rows, fmt: str = "csv", path: str | None = None) -> str:
    """Serialize aggregate rows; returns the text written.

    CSV is a bare header plus one line per row, full-precision decimals.
    JSON mirrors the columns as named fields and records the tolerance set.
    """
    if not rows:
        raise ValueError("nothing to emit: empty row list")
    if fmt == "csv":
        lines = [",".join(CSV_COLUMNS)]
        for row in rows:
            lines.append(",".join(_fmt(v) for v in row.as_tuple()))
        text = "\n".join(lines) + "\n"
    elif fmt == "json":
        payload = {
            "tolerances": DEFAULT_TOLERANCES.as_dict(),
            "rows": [dict(zip(CSV_COLUMNS, row.as_tuple())) for row in rows],
        }
        text = json.dumps(payload, indent=2) + "\n"
    else:
        raise ConfigError(f"unknown output format {fmt!r}")
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
