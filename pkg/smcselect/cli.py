#!/usr/bin/env python3
"""
smcselect - Bayesian variable selection with resample-move SMC.

Usage:
    smcselect run configs/toy.yml                        # run all samplers, write results
    smcselect run configs/boston.yml --jobs 8 --set smc.n=20000
    smcselect summarize results/boston --format json     # re-aggregate saved reports
    smcselect enumerate configs/toy.yml                  # exact marginals for small d
    smcselect validate configs/boston.yml

Global flags (work on every subcommand):
    --debug        Show full Python traceback on errors
    -v / --verbose Verbose per-step output
"""

import argparse
import json
import logging
import sys
from pathlib import Path

try:
    from importlib.metadata import version as _pkg_version
    _VERSION = _pkg_version("smcselect")
except Exception:
    _VERSION = "dev"

from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from smcselect.bench import (
    build_problem,
    emit_report,
    load_reports,
    render_summary,
    run_experiment,
    summarize,
    write_reports,
)
from smcselect.parser import YamlExperimentParser


# ---------------------------------------------------------------------------
# Shared helpers
# ---------------------------------------------------------------------------

def _add_common_args(p: argparse.ArgumentParser) -> None:
    """Add --debug / -v flags that every subcommand shares."""
    p.add_argument(
        "--debug", action="store_true",
        help="Show full Python traceback on errors (and DEBUG logging)",
    )
    p.add_argument(
        "-v", "--verbose", action="store_true",
        help="Enable verbose per-step output",
    )
    p.add_argument("--json", action="store_true", help="Machine-readable JSON output")


def _add_override_args(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
        help="Override a config value, e.g. smc.n=15000 or budget=1e6 (repeatable)",
    )


def _setup_logging(args) -> None:
    """Route library logging through rich on stderr."""
    if getattr(args, "debug", False):
        level = logging.DEBUG
    elif getattr(args, "verbose", False):
        level = logging.INFO
    else:
        level = logging.WARNING
    logging.basicConfig(
        level=level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


def log(msg: str, args, level: str = "progress") -> None:
    """Emit a progress message.

    JSON mode  → JSON Lines to stderr: {"type": level, "message": msg}
    Verbose    → plain text to stdout
    Otherwise  → silent
    """
    if getattr(args, "json", False):
        print(json.dumps({"type": level, "message": msg}), file=sys.stderr, flush=True)
    elif getattr(args, "verbose", False):
        print(msg)


def err(msg: str, args, exc: Exception = None) -> None:
    """Print a user-facing error to stderr, then exit 1.

    Full traceback is shown only when --debug is set.
    """
    if getattr(args, "json", False):
        print(json.dumps({"success": False, "error": msg}))
    else:
        print(f"✗ {msg}", file=sys.stderr)
        if exc is not None:
            if getattr(args, "debug", False):
                import traceback
                traceback.print_exc(file=sys.stderr)
            else:
                print("  Run with --debug for a full traceback.", file=sys.stderr)
    sys.exit(1)


def _load_config(args):
    """Parse the experiment file with --set overrides and the shortcut flags."""
    overrides = list(getattr(args, "overrides", []) or [])
    for flag, key in (
        ("seed", "seed"),
        ("budget", "budget"),
        ("jobs", "jobs"),
        ("format", "output.format"),
        ("output", "output.directory"),
        ("repetitions", "repetitions"),
    ):
        value = getattr(args, flag, None)
        if value is not None:
            overrides.append(f"{key}={value}")
    return YamlExperimentParser().parse_file(args.config, overrides=overrides)


# ---------------------------------------------------------------------------
# Subcommand: run
# ---------------------------------------------------------------------------

def cmd_run(args):
    """Run every sampler of an experiment and write the results."""
    try:
        cfg = _load_config(args)
        log(f"Experiment '{cfg.name}': building problem", args)
        design, target = build_problem(cfg)
        log(f"  m={design.m}, d={design.d}, criterion={cfg.criterion.value}", args)

        reports = run_experiment(cfg, target=target)
        out = Path(cfg.output.directory)
        write_reports(reports, out)
        stats = summarize(reports)
        written = emit_report(stats, cfg.output.format, out)

        if args.json:
            print(json.dumps({
                "success": True,
                "experiment": cfg.name,
                "d": design.d,
                "files": [str(p) for p in written],
                "summary": stats.model_dump(mode="json", by_alias=True),
            }))
        else:
            render_summary(stats)
            print(f"✓ {len(reports)} runs written to {out}/")
    except SystemExit:
        raise
    except Exception as e:
        err(f"Run failed: {e}", args, e)


# ---------------------------------------------------------------------------
# Subcommand: summarize
# ---------------------------------------------------------------------------

def cmd_summarize(args):
    """Aggregate the reports saved in a result directory."""
    try:
        reports = load_reports(args.directory)
        log(f"Loaded {len(reports)} reports from {args.directory}", args)
        stats = summarize(reports)
        out = Path(args.output or args.directory)
        written = emit_report(stats, args.format or "csv", out)
        if args.json:
            print(json.dumps({
                "success": True,
                "files": [str(p) for p in written],
                "summary": stats.model_dump(mode="json", by_alias=True),
            }))
        else:
            render_summary(stats)
            print(f"✓ Summary of {len(reports)} runs written to {out}/")
    except SystemExit:
        raise
    except Exception as e:
        err(f"Summarize failed: {e}", args, e)


# ---------------------------------------------------------------------------
# Subcommand: enumerate
# ---------------------------------------------------------------------------

def cmd_enumerate(args):
    """Exact marginal inclusion probabilities by full enumeration."""
    import pandas as pd

    from smcselect.posterior import enumerate_exact

    try:
        cfg = _load_config(args)
        design, target = build_problem(cfg)
        limit = args.limit or cfg.enumeration_limit
        log(f"Enumerating 2^{design.d} models", args)
        exact = enumerate_exact(target, limit=limit, jobs=args.jobs or 1)
        frame = pd.DataFrame({"component": design.names, "marginal": exact.marginals})

        if args.output:
            out = Path(args.output)
            out.mkdir(parents=True, exist_ok=True)
            frame.to_csv(out / "exact.csv", index=False)
            log(f"Wrote {out / 'exact.csv'}", args)

        if args.json:
            print(json.dumps({
                "success": True,
                "d": design.d,
                "states": exact.n_states,
                "logEvidence": exact.log_evidence,
                "marginals": dict(zip(design.names, exact.marginals.tolist())),
            }))
        else:
            table = Table(title=f"Exact inclusion probabilities ({exact.n_states} models)")
            table.add_column("component")
            table.add_column("marginal", justify="right")
            for name, p in zip(design.names, exact.marginals):
                table.add_row(name, f"{p:.4f}")
            console = Console()
            console.print(table)
            console.print(f"log evidence: {exact.log_evidence:.6f}")
    except SystemExit:
        raise
    except Exception as e:
        err(f"Enumeration failed: {e}", args, e)


# ---------------------------------------------------------------------------
# Subcommand: validate
# ---------------------------------------------------------------------------

def cmd_validate(args):
    """Validate an experiment file."""
    from smcselect.model.validators import ExperimentValidator

    try:
        log(f"Validating {args.config}...", args)
        cfg = _load_config(args)
        validator = ExperimentValidator(cfg)
        is_valid = validator.validate_all()

        if args.json:
            print(json.dumps({
                "success": True,
                "valid": is_valid,
                "errors": [str(e) for e in validator.errors],
                "warnings": [str(w) for w in validator.warnings],
            }))
            if not is_valid:
                sys.exit(1)
        else:
            for w in validator.warnings:
                print(f"  ! {w}")
            for i in validator.infos:
                log(f"  {i}", args)
            if is_valid:
                print(f"✓ {args.config} is valid")
            else:
                print(f"✗ {args.config} is invalid:")
                for error in validator.errors:
                    print(f"  - {error}")
                sys.exit(1)
    except SystemExit:
        raise
    except Exception as e:
        err(f"Validation failed: {e}", args, e)


# ---------------------------------------------------------------------------
# Argument parser
# ---------------------------------------------------------------------------

_EXAMPLES = """\
Examples:
  smcselect run configs/toy.yml                       SMC vs. MMG on the toy problem
  smcselect run configs/boston.yml --jobs 8           repetitions on 8 processes
  smcselect run configs/toy.yml --set smc.n=20000     override a sampler parameter
  smcselect run configs/toy.yml --budget 1e6 --seed 7 change budget and master seed
  smcselect summarize results/toy --format json       re-aggregate saved reports
  smcselect enumerate configs/synthetic.yml           exact oracle (d <= 20)
  smcselect validate configs/protein.yml              check data file and budgets
"""


def main():
    parser = argparse.ArgumentParser(
        prog="smcselect",
        description="Bayesian variable selection with resample-move SMC and MCMC baselines",
        epilog=_EXAMPLES,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {_VERSION}"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    # ---- run ----
    run_p = subparsers.add_parser(
        "run",
        help="Run an experiment",
        description=(
            "Runs every sampler of the experiment for the configured number of\n"
            "repetitions and writes reports.jsonl plus the summary tables to the\n"
            "output directory."
        ),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    run_p.add_argument("config", help="Experiment YAML file")
    run_p.add_argument("--seed", type=int, help="Master seed (default: from config)")
    run_p.add_argument("--budget", help="Target evaluations per run, e.g. 2.5e6")
    run_p.add_argument("--jobs", "-j", type=int, help="Parallel repetitions")
    run_p.add_argument("--repetitions", "-r", type=int, help="Repetitions per sampler")
    run_p.add_argument("--format", choices=["csv", "json"], help="Summary format")
    run_p.add_argument("--output", "-o", help="Output directory")
    _add_override_args(run_p)
    _add_common_args(run_p)
    run_p.set_defaults(func=cmd_run)

    # ---- summarize ----
    sum_p = subparsers.add_parser("summarize", help="Aggregate saved run reports")
    sum_p.add_argument("directory", help="Result directory containing reports.jsonl")
    sum_p.add_argument("--format", choices=["csv", "json"], help="Summary format (default: csv)")
    sum_p.add_argument("--output", "-o", help="Output directory (default: the input directory)")
    _add_common_args(sum_p)
    sum_p.set_defaults(func=cmd_summarize)

    # ---- enumerate ----
    enum_p = subparsers.add_parser(
        "enumerate", help="Exact marginals by enumerating every model (small d)"
    )
    enum_p.add_argument("config", help="Experiment YAML file")
    enum_p.add_argument("--limit", type=int, help="Largest d to enumerate")
    enum_p.add_argument("--jobs", "-j", type=int, help="Scoring threads")
    enum_p.add_argument("--output", "-o", help="Write exact.csv to this directory")
    _add_override_args(enum_p)
    _add_common_args(enum_p)
    enum_p.set_defaults(func=cmd_enumerate)

    # ---- validate ----
    val_p = subparsers.add_parser("validate", help="Validate an experiment file")
    val_p.add_argument("config", help="Experiment YAML file")
    _add_override_args(val_p)
    _add_common_args(val_p)
    val_p.set_defaults(func=cmd_validate)

    args = parser.parse_args()
    _setup_logging(args)
    args.func(args)


if __name__ == "__main__":
    main()
