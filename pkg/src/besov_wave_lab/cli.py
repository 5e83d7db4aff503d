"""Command-line experiment driver.

Usage:
  besov-wave-lab list
  besov-wave-lab run experiment.cfg [--out DIR] [--seed N] [--jobs K]
                                    [--override-admissibility]

Configs are flat INI sections (auditable key = value lines).  Exit codes:
0 success, 2 config error, 3 admissibility failure without override,
4 blow-up inside a run that asserted global decay.
"""

from __future__ import annotations

import argparse
import configparser
import json
import os
import sys
from pathlib import Path

from besov_wave_lab.admissibility import check_lwp
from besov_wave_lab.experiments import REGISTRY, BlowupInGlobalRun, run_experiment
from besov_wave_lab.reporting import config_hash
from besov_wave_lab.solver import AdmissibilityError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_ADMISSIBILITY = 3
EXIT_BLOWUP = 4

_SOLVER_BACKED = {"contraction", "global-decay", "blowup-probe", "sweep-critical"}


class ConfigError(ValueError):
    pass


def load_config(path: str) -> dict[str, dict[str, str]]:
    parser = configparser.ConfigParser()
    parser.optionxform = str  # keys are case-sensitive (n vs N)
    try:
        read = parser.read(path)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from exc
    if not read:
        raise ConfigError(f"config file '{path}' not found or unreadable")
    return {name: dict(parser[name]) for name in parser.sections()}


def _emit_error(kind: str, message: str, code: int, out_dir: Path | None) -> None:
    record = {"error": {"type": kind, "message": message, "exit_code": code}}
    line = json.dumps(record, sort_keys=True)
    print(line, file=sys.stderr)
    if out_dir is not None:
        try:
            out_dir.mkdir(parents=True, exist_ok=True)
            (out_dir / "error.json").write_text(line + "\n", encoding="utf-8")
        except OSError:
            pass


def _validate_admissibility(cfg: dict[str, dict[str, str]], kind: str) -> list[str]:
    """Names of failing hypotheses for solver-backed experiments (empty = fine)."""
    if kind not in _SOLVER_BACKED or "problem" not in cfg:
        return []
    prob = cfg["problem"]
    grid = cfg.get("grid", {})
    n = int(prob.get("n", grid.get("n", "1")))
    r = float(prob.get("r", "4"))
    s = float(prob.get("s", "5"))
    if kind == "sweep-critical":
        powers = [
            int(p)
            for p in cfg.get("experiment", {}).get("powers", "7,8,9,10").split(",")
        ]
    else:
        powers = [int(prob.get("p", "9"))]
    failures: list[str] = []
    for p in powers:
        verdict = check_lwp(n, r, s, p)
        if not verdict.passed:
            failures.extend(f"p={p}: {msg}" for msg in verdict.failed_conditions())
    return failures


def cmd_list() -> int:
    width = max(len(name) for name in REGISTRY)
    for name in sorted(REGISTRY):
        spec = REGISTRY[name]
        print(f"{name:<{width}}  {spec.description}")
        print(f"{'':<{width}}  checks: {spec.claim}")
    return EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    out_dir: Path | None = Path(args.out) if args.out else None
    try:
        cfg = load_config(args.config)
        exp = cfg.get("experiment", {})
        kind = exp.get("kind")
        if not kind:
            raise ConfigError("config must set [experiment] kind")
        if kind not in REGISTRY:
            raise ConfigError(
                f"unknown experiment '{kind}'; run 'besov-wave-lab list'"
            )
        if out_dir is None:
            configured = cfg.get("output", {}).get("dir")
            out_dir = Path(configured) if configured else Path("bwl-out") / kind
        seed = args.seed
        if seed is None:
            seed = int(cfg.get("run", {}).get("seed", "0"))
        jobs = args.jobs
        if jobs is None:
            jobs = int(os.environ.get("BWL_JOBS", "1"))
        if args.override_admissibility:
            cfg.setdefault("run", {})["override_admissibility"] = "true"
    except (ConfigError, KeyError, ValueError) as exc:
        _emit_error("config", str(exc), EXIT_CONFIG, out_dir)
        return EXIT_CONFIG

    try:
        failures = _validate_admissibility(cfg, kind)
    except ValueError as exc:
        # Domain violations (r <= 2, non-integer p) are config errors.
        _emit_error("config", str(exc), EXIT_CONFIG, out_dir)
        return EXIT_CONFIG
    if failures and not args.override_admissibility:
        _emit_error(
            "admissibility",
            "; ".join(failures) + " (rerun with --override-admissibility to force)",
            EXIT_ADMISSIBILITY,
            out_dir,
        )
        return EXIT_ADMISSIBILITY

    try:
        report = run_experiment(kind, cfg, out_dir, seed=seed, jobs=jobs)
    except BlowupInGlobalRun as exc:
        _emit_error("blowup", str(exc), EXIT_BLOWUP, out_dir)
        return EXIT_BLOWUP
    except AdmissibilityError as exc:
        _emit_error("admissibility", str(exc), EXIT_ADMISSIBILITY, out_dir)
        return EXIT_ADMISSIBILITY
    except (ConfigError, KeyError, ValueError) as exc:
        _emit_error("config", str(exc), EXIT_CONFIG, out_dir)
        return EXIT_CONFIG

    report.meta["config_hash"] = config_hash(cfg)
    report.meta["seed"] = seed
    path = report.save(out_dir)
    status = "ok" if report.passed() else "check-verdicts"
    print(f"{kind}: {status} -> {path}")
    for name, verdict in sorted(report.verdicts.items()):
        print(f"  {name}: {verdict}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="besov-wave-lab",
        description="Run spectral verification experiments for the damped wave flow.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run_parser = sub.add_parser("run", help="run one experiment config")
    run_parser.add_argument("config", help="path to a flat INI config")
    run_parser.add_argument("--out", help="output directory for reports")
    run_parser.add_argument("--seed", type=int, help="RNG seed (overrides config)")
    run_parser.add_argument("--jobs", type=int, help="parallel workers for sweeps")
    run_parser.add_argument(
        "--override-admissibility",
        action="store_true",
        help="run even when the existence hypotheses fail",
    )
    sub.add_parser("list", help="list available experiments")
    args = parser.parse_args(argv)
    if args.command == "list":
        return cmd_list()
    return cmd_run(args)


if __name__ == "__main__":
    sys.exit(main())
