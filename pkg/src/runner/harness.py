"""
Execution of experiment specs: plan, run, evaluate, report.
"""
import logging
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from ..errors import ConfigError
from ..stepper import Trajectory, run_lockstep
from .config import ExperimentSpec, parse_config_text
from .presets import Groups, PresetOutcome, get_preset, run_records
from .report import CONFIG_FILE, Report, load_report
from .settings import RunnerConfig

logger = logging.getLogger(__name__)


def plan(spec: ExperimentSpec) -> Groups:
    """
    Build and validate every run config of a spec before anything runs.

    Raises:
        ConfigError: If a preset parameter or a derived config is invalid
    """
    try:
        groups = get_preset(spec.preset).plan(spec)
        for group in groups:
            for cfg in group:
                cfg.validate()
    except ValueError as e:
        raise ConfigError(f"preset {spec.preset}: {e}") from e
    names = [cfg.run_id for group in groups for cfg in group]
    if len(set(names)) != len(names):
        raise ConfigError(f"preset {spec.preset} produced duplicate run ids: {names}")
    return groups


def run_groups(groups: Groups, workers: int) -> Tuple[Dict[str, Trajectory], List[dict]]:
    """
    Run every group, concurrently across groups.

    Returns:
        Tuple of (trajectories by run_id in plan order, failure manifest entries)
    """
    order = [cfg.run_id for group in groups for cfg in group]
    finished: Dict[str, Trajectory] = {}
    failures = []
    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        futures = {executor.submit(run_lockstep, group): group for group in groups}
        for future in as_completed(futures):
            group = futures[future]
            ids = [cfg.run_id for cfg in group]
            try:
                for traj in future.result():
                    finished[traj.run_id] = traj
            except Exception as e:
                logger.error(f"[RUN] runs={ids} | failed | {type(e).__name__}: {e}")
                failures.append({"stage": "run", "runs": ids, "type": type(e).__name__, "error": str(e)})
    return {name: finished[name] for name in order if name in finished}, failures


def evaluate(spec: ExperimentSpec, runs: Dict[str, Trajectory], workers: int) -> Tuple[PresetOutcome, List[dict]]:
    """
    Preset evaluation plus the per-run checks.

    Returns:
        Tuple of (PresetOutcome, failure manifest entries)
    """
    outcome = PresetOutcome()
    failures = []
    try:
        outcome = get_preset(spec.preset).evaluate(spec, runs, workers)
    except Exception as e:
        logger.error(f"[EVAL] preset={spec.preset} | failed | {type(e).__name__}: {e}")
        failures.append({"stage": "evaluate", "runs": list(runs), "type": type(e).__name__, "error": str(e)})
    for traj in runs.values():
        outcome.records.extend(run_records(traj))
    return outcome, failures


def execute(
    spec: ExperimentSpec,
    workers: Optional[int] = None,
    output_root: Optional[Union[str, Path]] = None,
) -> Report:
    """
    Run a spec end to end and write its report.

    Args:
        spec: Validated experiment spec
        workers: Concurrent run groups (default: FASTCONV_WORKERS)
        output_root: Report root (default: FASTCONV_OUTPUT_ROOT)

    Returns:
        The written Report

    Raises:
        ConfigError: If planning fails (no run has started)
    """
    workers = RunnerConfig.WORKERS if workers is None else workers
    root = Path(RunnerConfig.OUTPUT_ROOT if output_root is None else output_root)
    started = time.perf_counter()

    groups = plan(spec)
    logger.info(f"[EXECUTE] preset={spec.preset} | groups={len(groups)} | runs={sum(len(g) for g in groups)} | workers={workers}")
    runs, failures = run_groups(groups, workers)
    outcome, eval_failures = evaluate(spec, runs, workers)

    report = Report(
        preset=spec.preset,
        config=spec.to_dict(),
        tables=outcome.tables,
        records=outcome.records,
        trajectories={**runs, **outcome.extra_runs},
        failures=failures + eval_failures,
        wall_time=time.perf_counter() - started,
    )
    report.write(root / spec.output)
    return report


def reaudit(directory: Union[str, Path], workers: Optional[int] = None) -> Report:
    """
    Re-evaluate a stored report from its config and persisted runs, then rewrite its results.

    Raises:
        FileNotFoundError: If directory holds no report
        ConfigError: If the stored config no longer validates
    """
    workers = RunnerConfig.WORKERS if workers is None else workers
    base = Path(directory)
    stored = load_report(base)
    spec = parse_config_text((base / CONFIG_FILE).read_text(), source=base / CONFIG_FILE)
    started = time.perf_counter()

    order = [cfg.run_id for group in plan(spec) for cfg in group]
    runs = {name: stored.trajectories[name] for name in order if name in stored.trajectories}
    missing = [name for name in order if name not in runs]
    failures = [{"stage": "audit", "runs": missing, "type": "MissingRun", "error": "run not stored"}] if missing else []
    outcome, eval_failures = evaluate(spec, runs, workers)

    report = Report(
        preset=spec.preset,
        config=stored.config,
        tables=outcome.tables,
        records=outcome.records,
        trajectories=runs,
        failures=failures + eval_failures,
        wall_time=time.perf_counter() - started,
    )
    report.rewrite_results(base)
    return report
