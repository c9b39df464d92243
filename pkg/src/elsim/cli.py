"""Command-line entry point ``el-sim``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .checks import FAULTS, run_checks
from .config import ConfigError, RunConfig


def cmd_check(args) -> int:
    results = run_checks(args.filter, args.inject_fault or ())
    if not results:
        print(f"no checks match filter {args.filter!r}")
        return 2
    width = max(len(r[0]) for r in results)
    for name, ok, detail in results:
        print(f"{name:<{width}}  {'PASS' if ok else 'FAIL'}  {detail}")
    failed = [r[0] for r in results if not r[1]]
    if failed:
        print("failed: " + ", ".join(failed))
        return 1
    print(f"all {len(results)} checks passed")
    return 0


def _out_dir(cfg: RunConfig, args) -> Path:
    return Path(args.out) if args.out else cfg.resolve(cfg.output.directory)


def cmd_run(args) -> int:
    from .runner import run_config

    cfg = RunConfig.load(args.config)
    out = _out_dir(cfg, args)
    summary = run_config(cfg, out)
    print(f"{summary['status']}: {summary['steps']} steps to t={summary['t_final']:.6g}, "
          f"E0={summary['E0']:.6g}, E={summary['E_final']:.6g}, "
          f"max residual={summary['max_energy_eq_residual']:.3g}; output in {out}")
    return 0 if summary["status"] == "ok" else 3


def _parse_deltas(text: str) -> list:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ConfigError([f"--deltas must be a comma separated list of numbers, got {text!r}"])


def cmd_sweep(args) -> int:
    from .runner import delta_sweep

    cfg = RunConfig.load(args.config)
    deltas = _parse_deltas(args.deltas)
    out = _out_dir(cfg, args)
    summary = delta_sweep(cfg, deltas, out)
    for m in summary["members"]:
        print(f"delta={m['delta']:<8g} {m['status']}  |d|^2-1 L2={m['norm_L2_final']:.4g}  "
              f"defect/2E0={m['max_defect_over_2E0']:.3g}")
    fit = summary["norm_slope_fit"]
    if fit:
        print(f"log-log slope of the norm residual: {fit['slope']:.3f}")
    print(f"norm residual decreasing in delta: {summary['norm_L2_decreasing']}")
    bad = any(m["status"] != "ok" for m in summary["members"])
    return 3 if bad else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="el-sim", description="Spectral Ericksen-Leslie simulator")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="run the invariant suite")
    c.add_argument("--filter", default=None, help="only checks whose name contains this")
    c.add_argument("--inject-fault", action="append", choices=FAULTS, help=argparse.SUPPRESS)
    c.set_defaults(func=cmd_check)

    r = sub.add_parser("run", help="run one configuration")
    r.add_argument("--config", required=True)
    r.add_argument("--out", default=None, help="output directory (overrides the config)")
    r.set_defaults(func=cmd_run)

    s = sub.add_parser("sweep", help="run a configuration for several deltas")
    s.add_argument("--config", required=True)
    s.add_argument("--deltas", required=True, help="comma separated, e.g. 0.1,0.03,0.01")
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
