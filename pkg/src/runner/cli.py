#!/usr/bin/env python3
"""
fastconv command line.

    fastconv run <config.json>        execute a preset and write its report
    fastconv audit <rundir>           re-evaluate a report from its stored runs
    fastconv resume <checkpoint>      continue one stored run
    fastconv plotdata <rundir>        write per-figure CSVs under <rundir>/plotdata/

Exit codes: 0 when every asserted check passes, 1 on failed checks or
errors, 2 on an invalid configuration.
"""
import argparse
import logging
import os
import shutil
import sys
import tempfile
from pathlib import Path
from typing import List, Optional

from dotenv import load_dotenv

from ..errors import ConfigError, FastConvError
from ..stepper import resume, save_trajectory
from .config import parse_config
from .harness import execute, reaudit
from .report import Report, emit_plotdata, load_report
from .settings import RunnerConfig

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2


def _print_summary(report: Report, location: Path) -> None:
    print("=" * 80)
    print(f"{report.preset}: {'PASSED' if report.passed else 'FAILED'}")
    print("=" * 80)
    for record in report.records:
        status = "pass" if record.passed else ("FAIL" if record.asserted else "info")
        print(f"  [{status}] {record.name}: measured={record.measured:.6g} tol={record.tolerance:.3g}")
    for failure in report.failures:
        print(f"  [error] {failure['stage']} {failure['runs']}: {failure['type']}: {failure['error']}")
    print(f"\nReport: {location}")


def cmd_run(args: argparse.Namespace) -> int:
    spec = parse_config(args.config)
    root = Path(args.output_root or RunnerConfig.OUTPUT_ROOT)
    report = execute(spec, workers=args.workers, output_root=root)
    _print_summary(report, root / spec.output)
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_audit(args: argparse.Namespace) -> int:
    report = reaudit(args.rundir, workers=args.workers)
    _print_summary(report, Path(args.rundir))
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_resume(args: argparse.Namespace) -> int:
    checkpoint = Path(args.checkpoint)
    traj = resume(checkpoint, t_end=args.t_end, snapshot_times=args.snapshot or ())
    target = Path(args.output) if args.output else checkpoint
    target.parent.mkdir(parents=True, exist_ok=True)
    staging = Path(tempfile.mkdtemp(prefix=f".{target.name}-", dir=target.parent))
    try:
        save_trajectory(traj, staging)
        if target.exists():
            shutil.rmtree(target)
        os.replace(staging, target)
    except Exception:
        shutil.rmtree(staging, ignore_errors=True)
        raise
    print(f"Resumed {traj.run_id} to t={traj.t_final:g} after {traj.steps} steps -> {target}")
    return EXIT_OK


def cmd_plotdata(args: argparse.Namespace) -> int:
    report = load_report(args.rundir)
    written = emit_plotdata(report, args.rundir)
    print(f"Wrote {len(written)} files under {Path(args.rundir) / 'plotdata'}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fastconv",
        description="Finite-volume experiments for fast-convection diffusion equations",
    )
    parser.add_argument("--log-level", default=None, help="Logging level (default: FASTCONV_LOG_LEVEL)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="Execute a preset from a config file")
    p_run.add_argument("config", type=str, help="Experiment config (JSON with dotted keys)")
    p_run.add_argument("--workers", type=int, default=None, help="Concurrent runs (default: FASTCONV_WORKERS)")
    p_run.add_argument("--output-root", type=str, default=None, help="Report root (default: FASTCONV_OUTPUT_ROOT)")
    p_run.set_defaults(handler=cmd_run)

    p_audit = sub.add_parser("audit", help="Re-evaluate a report from its stored runs")
    p_audit.add_argument("rundir", type=str, help="Report directory")
    p_audit.add_argument("--workers", type=int, default=None, help="Concurrent audit levels")
    p_audit.set_defaults(handler=cmd_audit)

    p_resume = sub.add_parser("resume", help="Continue a stored run")
    p_resume.add_argument("checkpoint", type=str, help="Checkpoint directory (runs/<run_id> of a report)")
    p_resume.add_argument("--t-end", type=float, default=None, help="New end time (default: stored t_end)")
    p_resume.add_argument("--snapshot", type=float, action="append", help="Additional snapshot time (repeatable)")
    p_resume.add_argument("--output", type=str, default=None, help="Write the continued run here instead")
    p_resume.set_defaults(handler=cmd_resume)

    p_plot = sub.add_parser("plotdata", help="Write per-figure CSVs for a report")
    p_plot.add_argument("rundir", type=str, help="Report directory")
    p_plot.set_defaults(handler=cmd_plotdata)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    args = build_parser().parse_args(argv)
    try:
        RunnerConfig.reload()
        if args.log_level:
            RunnerConfig.LOG_LEVEL = args.log_level
        RunnerConfig.validate()
    except ValueError as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_CONFIG
    logging.basicConfig(
        level=RunnerConfig.log_level(),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )

    try:
        return args.handler(args)
    except ConfigError as e:
        logger.error(f"Invalid configuration: {e}")
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (FastConvError, OSError, ValueError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
