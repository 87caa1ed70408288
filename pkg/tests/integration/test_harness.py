"""
End-to-end preset execution, re-audit and failure handling.
"""
import json
import shutil

import pytest

from src.runner import execute, load_report, parse_config_text, reaudit

pytestmark = pytest.mark.integration


def _spec(**values):
    return parse_config_text(json.dumps(values))


@pytest.fixture
def contraction_spec():
    return _spec(**{
        "preset": "contraction",
        "grid.half_width": [10.0],
        "grid.spacing": [0.05],
        "initial.width": 0.5,
        "time.end": 0.2,
        "time.snapshots": [0.1],
        "params.pairs": 2,
        "params.seed": 7,
    })


@pytest.fixture
def audit_spec():
    return _spec(**{
        "preset": "entropy_audit",
        "grid.half_width": [4.0],
        "grid.spacing": [0.05],
        "initial.kind": "box",
        "initial.width": 1.0,
        "time.end": 0.1,
        "params.levels": 4,
        "params.bumps": 3,
    })


class TestExecute:
    """Test execute() on small presets."""

    def test_contraction_report(self, contraction_spec, tmp_path):
        report = execute(contraction_spec, workers=2, output_root=tmp_path)
        assert report.passed, [r.name for r in report.records if r.failed]
        assert sorted(report.trajectories) == ["pair00-a", "pair00-b", "pair01-a", "pair01-b"]
        names = {r.name for r in report.records}
        assert "contraction[pair00-a~pair00-b]" in names
        assert "mass_conservation[pair01-b]" in names
        target = tmp_path / "contraction"
        assert (target / "tables" / "contraction.csv").exists()
        assert sorted(p.name for p in (target / "runs").iterdir()) == sorted(report.trajectories)

    def test_same_seed_same_runs(self, contraction_spec, tmp_path):
        first = execute(contraction_spec, workers=1, output_root=tmp_path / "a")
        second = execute(contraction_spec, workers=2, output_root=tmp_path / "b")
        for name, traj in first.trajectories.items():
            assert (traj.final.values == second.trajectories[name].final.values).all()

    def test_entropy_audit_report(self, audit_spec, tmp_path):
        report = execute(audit_spec, workers=2, output_root=tmp_path)
        assert report.passed
        reversed_row = next(r for r in report.records if r.name.startswith("reversed_run_fails"))
        assert reversed_row.passed
        assert set(report.tables["entropy_audit"]["run"]) == {"entropy_audit", "entropy_audit-reversed"}

    def test_uniqueness_report_measures_floor(self, tmp_path):
        spec = _spec(**{
            "preset": "uniqueness",
            "grid.half_width": [5.0],
            "grid.spacing": [0.05],
            "operator.kind": "reduced",
            "time.end": 0.2,
            "params.widths": [0.4, 0.2],
            "params.t_star": 0.2,
            "params.floor_spacing": 0.05,
        })
        report = execute(spec, workers=2, output_root=tmp_path)
        assert "unique-floor" in report.trajectories
        floor_row = next(r for r in report.records if r.name == "uniqueness_floor")
        assert floor_row.details["floor"] > 0
        assert floor_row.tolerance == pytest.approx(2.0 * floor_row.details["floor"])
        assert floor_row.measured == pytest.approx(report.tables["uniqueness"]["distance"].iloc[-1])
        assert report.tables["uniqueness_floor"]["bound"].iloc[0] == pytest.approx(floor_row.tolerance)

    def test_explicit_floor_skips_measurement(self, tmp_path):
        spec = _spec(**{
            "preset": "uniqueness",
            "grid.half_width": [5.0],
            "grid.spacing": [0.05],
            "operator.kind": "reduced",
            "time.end": 0.2,
            "params.widths": [0.4, 0.2],
            "params.t_star": 0.2,
            "params.error_floor": 10.0,
        })
        report = execute(spec, output_root=tmp_path)
        assert "unique-floor" not in report.trajectories
        floor_row = next(r for r in report.records if r.name == "uniqueness_floor")
        assert floor_row.tolerance == 20.0
        assert floor_row.passed

    def test_failed_runs_land_in_manifest(self, tmp_path):
        spec = _spec(**{
            "preset": "sandwich",
            "grid.half_width": [3.0],
            "grid.spacing": [0.05],
            "initial.width": 0.5,
            "time.end": 0.5,
            "run.boundary_leak_tol": 1e-12,
        })
        report = execute(spec, output_root=tmp_path)
        assert not report.passed
        stages = {f["stage"] for f in report.failures}
        assert "run" in stages
        manifest = json.loads((tmp_path / "sandwich" / "failures.json").read_text())
        assert any(f["type"] == "BoundaryLeakError" for f in manifest)


class TestReaudit:
    """Test re-evaluation of stored reports."""

    def test_reaudit_reproduces_records(self, audit_spec, tmp_path):
        report = execute(audit_spec, output_root=tmp_path)
        again = reaudit(tmp_path / "entropy_audit", workers=2)
        assert [r.name for r in again.records] == [r.name for r in report.records]
        for a, b in zip(again.records, report.records):
            assert a.passed == b.passed
            assert a.measured == pytest.approx(b.measured, rel=1e-12, abs=1e-300)
        loaded = load_report(tmp_path / "entropy_audit")
        assert loaded.passed

    def test_missing_runs_are_reported(self, contraction_spec, tmp_path):
        execute(contraction_spec, output_root=tmp_path)
        target = tmp_path / "contraction"
        shutil.rmtree(target / "runs" / "pair01-b")
        report = reaudit(target)
        assert not report.passed
        assert report.failures[0]["runs"] == ["pair01-b"]
