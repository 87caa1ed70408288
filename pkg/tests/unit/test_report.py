"""
Unit tests for report directories and plot data.
"""
import json

import numpy as np
import pandas as pd
import pytest

from src.diagnostics import at_most, reported
from src.flux import FluxParams
from src.grid import Grid
from src.runner import Report, emit_plotdata, load_report
from src.stepper import InitialRecipe, RunConfig, run


@pytest.fixture(scope="module")
def small_run():
    cfg = RunConfig(
        grid=Grid.symmetric([3.0], [0.05]),
        flux=FluxParams(q=0.75, eta=None),
        initial=InitialRecipe("gaussian", width=0.3),
        t_end=0.05,
        snapshot_times=(0.02,),
        run_id="small",
    )
    return run(cfg)


@pytest.fixture
def report(small_run):
    return Report(
        preset="selfsim_collapse",
        config={"preset": "selfsim_collapse", "flux.q": 0.75},
        tables={"collapse": pd.DataFrame({"t": [1.0, 2.0], "distance": [0.5, 0.25]})},
        records=[at_most("check", 0.1, 1.0, "fixed"), reported("info", float("inf"), "report only")],
        trajectories={"small": small_run},
        wall_time=1.5,
    )


class TestReportDirectory:
    """Test writing and reading report directories."""

    def test_layout(self, report, tmp_path):
        target = report.write(tmp_path / "out")
        assert sorted(p.name for p in target.iterdir()) == ["config.json", "metadata.json", "runs",
                                                           "summary.json", "tables"]
        assert [p.name for p in tmp_path.iterdir()] == ["out"]
        summary = json.loads((target / "summary.json").read_text())
        assert summary["passed"] is True
        assert summary["checks"] == 2 and summary["failed_checks"] == []
        metadata = json.loads((target / "metadata.json").read_text())
        assert metadata["runs"] == {"small": report.trajectories["small"].config.config_hash()}
        assert len(metadata["config_hash"]) == 64

    def test_round_trip(self, report, tmp_path):
        target = report.write(tmp_path / "out")
        loaded = load_report(target)
        assert loaded.preset == "selfsim_collapse"
        assert loaded.config == report.config
        assert [r.name for r in loaded.records] == ["check", "info"]
        assert loaded.records[1].measured == float("inf")
        pd.testing.assert_frame_equal(loaded.tables["collapse"], report.tables["collapse"])
        traj = loaded.trajectories["small"]
        assert traj.times == report.trajectories["small"].times
        assert np.array_equal(traj.final.values, report.trajectories["small"].final.values)
        assert loaded.wall_time == 1.5

    def test_overwrite_replaces(self, report, tmp_path):
        report.write(tmp_path / "out")
        report.tables = {"other": pd.DataFrame({"a": [1]})}
        target = report.write(tmp_path / "out")
        assert [p.name for p in (target / "tables").iterdir()] == ["other.csv"]
        assert [p.name for p in tmp_path.iterdir()] == ["out"]

    def test_failures_fail_the_report(self, report, tmp_path):
        target = report.write(tmp_path / "out")
        report.failures = [{"stage": "run", "runs": ["small"], "type": "BoundaryLeakError", "error": "leak"}]
        assert not report.passed
        report.rewrite_results(target)
        assert json.loads((target / "failures.json").read_text())[0]["type"] == "BoundaryLeakError"
        assert not json.loads((target / "summary.json").read_text())["passed"]

        report.failures = []
        report.rewrite_results(target)
        assert not (target / "failures.json").exists()
        assert (target / "runs" / "small").is_dir()
        assert not [p for p in target.iterdir() if p.name.startswith(".")]

    def test_failed_assertion(self, report):
        report.records.append(at_most("bad", 2.0, 1.0, "fixed"))
        assert not report.passed
        assert report.summary()["failed_checks"] == ["bad"]

    def test_missing_report(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_report(tmp_path)


class TestPlotData:
    """Test per-figure CSV emission."""

    def test_files(self, report, tmp_path):
        written = emit_plotdata(report, tmp_path)
        names = sorted(p.stem for p in written)
        snapshots = len(report.trajectories["small"].times)
        assert "table_collapse" in names
        assert {"loglog_small_p1", "loglog_small_p2", "loglog_small_pinf"} <= set(names)
        assert sum(n.startswith("profile_small_") for n in names) == snapshots
        assert all(p.parent == tmp_path / "plotdata" for p in written)

    def test_loglog_and_profile_columns(self, report, tmp_path):
        emit_plotdata(report, tmp_path)
        loglog = pd.read_csv(tmp_path / "plotdata" / "loglog_small_p2.csv")
        assert list(loglog.columns) == ["log_t", "log_norm"]
        assert (np.diff(loglog["log_t"]) > 0).all()
        first = pd.read_csv(tmp_path / "plotdata" / "profile_small_000.csv")
        last = pd.read_csv(tmp_path / "plotdata" / "profile_small_002.csv")
        assert "profile" not in first.columns
        assert {"x_N", "u", "primitive", "xi_N", "profile"} <= set(last.columns)

    def test_other_presets_skip_profiles(self, report, tmp_path):
        report.preset = "contraction"
        written = emit_plotdata(report, tmp_path)
        assert not [p for p in written if p.stem.startswith("profile_")]
