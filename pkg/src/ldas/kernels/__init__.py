"""Hot numerical kernels with a compiled core and a pure-python fallback.

The compiled extension (Cython) is preferred; set LDAS_PURE_PYTHON=1 to force
the numpy fallback. Both backends implement the same contracts:

  lambert_w0(x)                  principal Lambert W branch
  greedy_sweep(da, ue, q, M, U)  quota-constrained assignment sweep
  power_phi_max(...)             concave power-feasibility maximization
"""
from __future__ import annotations

import os

if os.environ.get("LDAS_PURE_PYTHON"):
    from . import _pure as _impl
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _pure as _impl

BACKEND: str = _impl.BACKEND
lambert_w0 = _impl.lambert_w0
greedy_sweep = _impl.greedy_sweep
power_phi_max = _impl.power_phi_max

__all__ = ["BACKEND", "lambert_w0", "greedy_sweep", "power_phi_max"]
