"""Energy-efficiency simulator and optimizer for large-scale distributed-antenna downlinks.

Pipeline per channel realization: greedy antenna selection, interference-based
user clustering, per-cluster zero-forcing precoding, per-cluster power control
(closed-form heuristic or quasi-convex optimal), antenna-count and threshold
adaptation, then network-level evaluation with actual inter-cluster
interference. A Monte Carlo harness sweeps parameters and emits CSV/JSON.
"""
from .channel import ChannelRealization, draw_realization
from .harness import AggregateRow, SweepSpec, emit, run_sweep
from .kernels import BACKEND as KERNEL_BACKEND
from .pipeline import EEReport, adapt_gamma, solve_realization
from .scenario import ScenarioConfig, default_lcas, default_ldas, load_config

__version__ = "0.1.0"

__all__ = [
    "AggregateRow",
    "ChannelRealization",
    "EEReport",
    "KERNEL_BACKEND",
    "ScenarioConfig",
    "SweepSpec",
    "adapt_gamma",
    "default_lcas",
    "default_ldas",
    "draw_realization",
    "emit",
    "load_config",
    "run_sweep",
    "solve_realization",
    "__version__",
]
