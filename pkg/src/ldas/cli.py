"""Command-line interface: `ldas run ...`."""
from __future__ import annotations

import argparse
import os
import sys

from . import kernels
from .harness import emit, parse_sweep, run_sweep
from .scenario import ConfigError, load_config


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ldas",
        description="Monte Carlo energy-efficiency sweeps for distributed-antenna downlinks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a parameter sweep and emit aggregates")
    run.add_argument("--config", default=None, help="JSON config file (all fields optional)")
    run.add_argument("--sweep", default=None,
                     help="axis=v1,v2,... or axis=start:stop:step; axes: "
                          "gamma (dB), num_ues, num_das, beta, p_sig (W/Hz)")
    run.add_argument("--realizations", type=int, default=None)
    run.add_argument("--seed", type=int, default=None, help="master seed")
    run.add_argument("--mode", choices=["ldas", "lcas"], default=None)
    run.add_argument("--power-control", choices=["heuristic", "optimal"], default=None)
    run.add_argument("--adapt", choices=["on", "off"], default="off",
                     help="per-realization threshold adaptation")
    run.add_argument("--out", default=None, help="output path (default: stdout)")
    run.add_argument("--format", choices=["csv", "json"], default="csv")
    run.add_argument("--threads", type=int, default=None,
                     help="worker processes (default env LDAS_THREADS or 1)")
    run.add_argument("--gamma", type=float, default=None, help="clustering threshold (dB)")
    run.add_argument("--num-ues", type=int, default=None)
    run.add_argument("--num-das", type=int, default=None)
    run.add_argument("--beta", type=float, default=None, help="processing exponent")
    run.add_argument("--p-sig", type=float, default=None, help="signaling power (W/Hz)")
    run.add_argument("--as-metric", choices=["cgb", "mdb"], default=None)
    run.add_argument("--quiet", action="store_true")
    return parser


def _threads(arg_value) -> int:
    if arg_value is not None:
        return max(1, arg_value)
    env = os.environ.get("LDAS_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise ConfigError(f"LDAS_THREADS must be an integer, got {env!r}") from exc
    return 1


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = load_config(
            args.config,
            realizations=args.realizations,
            master_seed=args.seed,
            mode=args.mode,
            power_control=getattr(args, "power_control"),
            clustering_threshold_db=args.gamma,
            num_ues=args.num_ues,
            num_das=args.num_das,
            processing_exponent=args.beta,
            signaling_power_w_per_hz=args.p_sig,
            as_metric=args.as_metric,
        )
        sweep_text = args.sweep or f"gamma={config.clustering_threshold_db}"
        sweep = parse_sweep(sweep_text)
        threads = _threads(args.threads)
        rows = run_sweep(config, sweep, adapt=(args.adapt == "on"), threads=threads)
        text = emit(rows, fmt=args.format, path=args.out)
        if args.out is None:
            sys.stdout.write(text)
        elif not args.quiet:
            print(f"wrote {len(rows)} rows to {args.out} "
                  f"({config.realizations} realizations/point, kernels: {kernels.BACKEND})")
    except (ConfigError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
