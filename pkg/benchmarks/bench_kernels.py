#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-python fallback.

Times the three hot kernels on production-shaped inputs, then one full
realization solve per backend. Run: python benchmarks/bench_kernels.py
"""
import math
import os
import time

import numpy as np

from ldas.kernels import _pure

try:
    from ldas.kernels import _core
except ImportError:
    _core = None


def timeit(fn, repeats=5, number=20):
    best = math.inf
    for _ in range(repeats):
        start = time.perf_counter()
        for _ in range(number):
            fn()
        best = min(best, (time.perf_counter() - start) / number)
    return best


def bench_lambert(impl):
    xs = 10.0 ** np.linspace(-6, 8, 1000)

    def run():
        for x in xs:
            impl.lambert_w0(float(x))

    return timeit(run, number=5)


def bench_greedy(impl, num_das=900, num_ues=20, seed=0):
    rng = np.random.default_rng(seed)
    metric = rng.standard_normal((num_ues, num_das))
    quotas = np.full(num_ues, 3, dtype=np.int64)
    ue_idx = np.repeat(np.arange(num_ues, dtype=np.int64), num_das)
    da_idx = np.tile(np.arange(num_das, dtype=np.int64), num_ues)
    order = np.lexsort((ue_idx, da_idx, metric.ravel()))
    da, ue = da_idx[order], ue_idx[order]
    return timeit(lambda: impl.greedy_sweep(da, ue, quotas, num_das, num_ues),
                  number=50)


def bench_power(impl, num_ues=20, num_rows=40, seed=1):
    rng = np.random.default_rng(seed)
    d = rng.uniform(1e-4, 1e-2, size=num_ues)
    s_lo = rng.uniform(0.5, 2.0, size=num_ues)
    G = rng.uniform(0.0, 1e-5, size=(num_rows, num_ues))
    # a handful of tight rows, the rest slack (the production pattern)
    cap = G @ s_lo * rng.uniform(2.0, 1e4, size=num_rows)
    shift = 5.0
    return timeit(lambda: impl.power_phi_max(d, shift, s_lo, G, cap),
                  repeats=3, number=5)


def bench_pipeline(backend_env):
    import subprocess
    import sys
    code = (
        "import time\n"
        "from ldas.scenario import default_ldas\n"
        "from ldas.channel import draw_realization\n"
        "from ldas.pipeline import solve_realization\n"
        "cfg = default_ldas(power_control='optimal')\n"
        "chan = draw_realization(cfg, [0, 0])\n"
        "solve_realization(chan, cfg)\n"
        "start = time.perf_counter()\n"
        "for k in range(5):\n"
        "    solve_realization(draw_realization(cfg, [0, k]), cfg)\n"
        "print((time.perf_counter() - start) / 5)\n"
    )
    env = dict(os.environ)
    env.update(backend_env)
    out = subprocess.run([sys.executable, "-c", code], capture_output=True,
                         text=True, env=env, check=True)
    return float(out.stdout.strip())


def main():
    rows = [("kernel", "pure", "compiled", "speedup")]

    def add(name, pure_s, comp_s):
        if comp_s is None:
            rows.append((name, f"{pure_s * 1e3:9.3f} ms", "n/a", ""))
        else:
            rows.append((name, f"{pure_s * 1e3:9.3f} ms",
                         f"{comp_s * 1e3:9.3f} ms", f"{pure_s / comp_s:6.1f}x"))

    add("lambert_w0 (1000 calls)", bench_lambert(_pure),
        bench_lambert(_core) if _core else None)
    add("greedy_sweep (M=900,U=20)", bench_greedy(_pure),
        bench_greedy(_core) if _core else None)
    add("power_phi_max (U=20,rows=40)", bench_power(_pure),
        bench_power(_core) if _core else None)

    pipe_pure = bench_pipeline({"LDAS_PURE_PYTHON": "1"})
    pipe_comp = bench_pipeline({"LDAS_PURE_PYTHON": ""}) if _core else None
    add("solve_realization (optimal PC)", pipe_pure, pipe_comp)

    widths = [max(len(str(r[i])) for r in rows) for i in range(4)]
    for row in rows:
        print("  ".join(str(c).ljust(w) for c, w in zip(row, widths)))


if __name__ == "__main__":
    main()
