"""
Command line: exit codes, subcommands and shipped configs.
"""
import json
from pathlib import Path

import pytest

from src.runner import RunnerConfig
from src.runner.cli import EXIT_CONFIG, EXIT_FAILED, EXIT_OK, main
from src.stepper import load_trajectory

pytestmark = pytest.mark.integration

CONFIG_DIR = Path(__file__).resolve().parents[2] / "configs"

SMALL = {
    "preset": "sandwich",
    "grid.half_width": [6.0],
    "grid.spacing": [0.05],
    "initial.width": 0.5,
    "time.end": 0.2,
    "time.snapshots": [0.1],
}


@pytest.fixture(autouse=True)
def isolated_env(monkeypatch, tmp_path):
    saved = (RunnerConfig.OUTPUT_ROOT, RunnerConfig.WORKERS, RunnerConfig.LOG_LEVEL)
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("FASTCONV_OUTPUT_ROOT", str(tmp_path / "results"))
    monkeypatch.setenv("FASTCONV_WORKERS", "2")
    monkeypatch.setenv("FASTCONV_LOG_LEVEL", "WARNING")
    yield
    RunnerConfig.OUTPUT_ROOT, RunnerConfig.WORKERS, RunnerConfig.LOG_LEVEL = saved


@pytest.fixture
def small_config(tmp_path):
    path = tmp_path / "small.json"
    path.write_text(json.dumps(SMALL, indent=2))
    return path


class TestRun:
    """Test the run subcommand."""

    def test_passing_run(self, small_config, tmp_path, capsys):
        assert main(["run", str(small_config)]) == EXIT_OK
        out = capsys.readouterr().out
        assert "sandwich: PASSED" in out
        assert "[pass] primitive_sandwich" in out
        assert (tmp_path / "results" / "sandwich" / "summary.json").exists()

    def test_output_root_flag(self, small_config, tmp_path):
        assert main(["run", str(small_config), "--output-root", str(tmp_path / "elsewhere"), "--workers", "1"]) == EXIT_OK
        assert (tmp_path / "elsewhere" / "sandwich" / "config.json").exists()

    def test_invalid_config(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text('{\n  "preset": "sandwich",\n  "flux.q": "fast"\n}')
        assert main(["run", str(path)]) == EXIT_CONFIG
        assert "line 3" in capsys.readouterr().err

    def test_missing_config_file(self, tmp_path):
        assert main(["run", str(tmp_path / "nope.json")]) == EXIT_CONFIG

    def test_failed_checks(self, tmp_path):
        path = tmp_path / "leaky.json"
        path.write_text(json.dumps({**SMALL, "grid.half_width": [3.0], "time.end": 0.5,
                                    "run.boundary_leak_tol": 1e-12}))
        assert main(["run", str(path)]) == EXIT_FAILED

    def test_invalid_environment(self, small_config, monkeypatch):
        monkeypatch.setenv("FASTCONV_WORKERS", "0")
        assert main(["run", str(small_config)]) == EXIT_CONFIG

    def test_log_level_flag(self, small_config):
        assert main(["--log-level", "NOISY", "run", str(small_config)]) == EXIT_CONFIG


class TestFollowUps:
    """Test audit, resume and plotdata on a written report."""

    @pytest.fixture
    def rundir(self, small_config, tmp_path):
        assert main(["run", str(small_config)]) == EXIT_OK
        return tmp_path / "results" / "sandwich"

    def test_audit(self, rundir, capsys):
        assert main(["audit", str(rundir)]) == EXIT_OK
        assert "PASSED" in capsys.readouterr().out

    def test_audit_missing_report(self, tmp_path):
        assert main(["audit", str(tmp_path / "empty")]) == EXIT_FAILED

    def test_plotdata(self, rundir):
        assert main(["plotdata", str(rundir)]) == EXIT_OK
        files = {p.stem for p in (rundir / "plotdata").iterdir()}
        assert "table_sandwich" in files
        assert "loglog_sandwich-u_p2" in files

    def test_resume_in_place(self, rundir):
        checkpoint = rundir / "runs" / "sandwich-u"
        assert main(["resume", str(checkpoint), "--t-end", "0.4", "--snapshot", "0.3"]) == EXIT_OK
        traj = load_trajectory(checkpoint)
        assert traj.t_final == pytest.approx(0.4)
        assert 0.3 in [round(t, 12) for t in traj.times]
        assert not [p for p in checkpoint.parent.iterdir() if p.name.startswith(".")]

    def test_resume_to_new_directory(self, rundir, tmp_path):
        checkpoint = rundir / "runs" / "sandwich-ubar"
        before = load_trajectory(checkpoint)
        target = tmp_path / "continued"
        assert main(["resume", str(checkpoint), "--t-end", "0.3", "--output", str(target)]) == EXIT_OK
        assert load_trajectory(target).t_final == pytest.approx(0.3)
        assert load_trajectory(checkpoint).t_final == before.t_final


@pytest.mark.slow
@pytest.mark.parametrize("name", ["contraction", "comparison", "entropy_audit", "sandwich", "energy_report"])
def test_shipped_config_passes(name, tmp_path):
    assert main(["run", str(CONFIG_DIR / f"{name}.json"), "--output-root", str(tmp_path)]) == EXIT_OK
