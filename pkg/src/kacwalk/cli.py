"""Command-line entry point: ``kacwalk <experiment> [flags]``.

Exit codes: 0 on success, 2 on usage or configuration errors, 1 on
runtime failures (numeric errors, invariant violations, I/O).
"""

from __future__ import annotations

import argparse
import os
import sys

from .errors import ConfigError, KacError, UsageError
from .experiments import KINDS, emit_results, run_experiment
from .experiments.config import config_from_dict, tomllib

SEED_ENV = "KAC_SEED"

_INT = {"n": "--n", "replicas": "--replicas", "seed": "--seed", "steps": "--steps",
        "edges": "--edges", "chunk_size": "--chunk-size", "t_phase1": "--t-phase1",
        "t_phase2": "--t-phase2", "bins": "--bins"}
_FLOAT = {"a": "--a", "b": "--b", "epsilon": "--epsilon", "c_exp": "--c-exp",
          "t1_factor": "--t1-factor", "l1_start": "--l1-start", "min_sq": "--min-sq",
          "alpha": "--alpha"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kacwalk", description="Monte Carlo experiments for Kac's walk on the sphere.")
    sub = parser.add_subparsers(dest="command", metavar="EXPERIMENT")
    sub.required = True
    for kind in KINDS:
        p = sub.add_parser(kind, help=f"run the {kind} experiment")
        p.add_argument("--config", help="flat TOML file with experiment settings")
        for key, flag in _INT.items():
            p.add_argument(flag, dest=key, type=int)
        for key, flag in _FLOAT.items():
            p.add_argument(flag, dest=key, type=float)
        p.add_argument("--t", dest="t_grid", type=int, nargs="+", metavar="T",
                       help="time grid")
        p.add_argument("--n-grid", dest="n_grid", type=int, nargs="+", metavar="N")
        p.add_argument("--start", choices=("worst", "random", "e1"))
        p.add_argument("--stop-early", dest="stop_early", action="store_true", default=None,
                       help="end phase one as soon as the chains are close")
        p.add_argument("--per-replica", dest="per_replica", action="store_true", default=None,
                       help="also write one CSV row per replica")
        p.add_argument("--threads", dest="workers", type=int,
                       help="worker processes (default: available CPUs)")
        p.add_argument("--output-dir", dest="output_dir")
    return parser


def _resolve(args) -> dict:
    raw = {}
    if args.config:
        try:
            with open(args.config, "rb") as fh:
                raw = tomllib.load(fh)
        except OSError as exc:
            raise ConfigError(f"config: cannot read {args.config}: {exc}", key="config") from exc
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"config: cannot parse {args.config}: {exc}", key="config") from exc
    if "kind" in raw and raw["kind"] != args.command:
        raise ConfigError(f"kind: config says {raw['kind']!r} but subcommand is "
                          f"{args.command!r}", key="kind")
    raw["kind"] = args.command
    overrides = {k: v for k, v in vars(args).items()
                 if k not in ("command", "config") and v is not None}
    if "seed" not in overrides and "seed" not in raw:
        env = os.environ.get(SEED_ENV)
        if env is not None:
            try:
                overrides["seed"] = int(env)
            except ValueError:
                raise ConfigError(f"seed: {SEED_ENV}={env!r} is not an integer", key="seed")
    if "workers" not in overrides and "workers" not in raw:
        overrides["workers"] = os.cpu_count() or 1
    return config_from_dict(raw, **overrides)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _resolve(args)
    except ConfigError as exc:
        key = f" (key: {exc.key})" if exc.key else ""
        print(f"kacwalk: configuration error{key}: {exc}", file=sys.stderr)
        return 2
    try:
        record = run_experiment(cfg)
        paths = emit_results([record], cfg.output_dir)
    except (UsageError, ConfigError) as exc:
        print(f"kacwalk: usage error: {exc}", file=sys.stderr)
        return 2
    except (KacError, ArithmeticError, ValueError, OSError) as exc:
        print(f"kacwalk: {cfg.kind} failed (n={cfg.n}, seed={cfg.seed}): "
              f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    print(record.summary_line())
    print(f"wrote {paths['jsonl']}", file=sys.stderr)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
