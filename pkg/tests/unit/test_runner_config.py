"""
Unit tests for experiment config parsing and planning.
"""
import json
import math
from pathlib import Path

import pytest

from src.errors import ConfigError
from src.runner import PRESETS, get_preset, parse_config, parse_config_text, plan

CONFIG_DIR = Path(__file__).resolve().parents[2] / "configs"


def _text(**values) -> str:
    return json.dumps(values, indent=2)


class TestParsing:
    """Test key validation, defaults and line-precise errors."""

    def test_defaults_fill_missing_keys(self):
        spec = parse_config_text(_text(preset="contraction"))
        assert spec.preset == "contraction"
        assert spec.output == "contraction"
        assert spec.base.grid.cells == (2001,)
        assert spec.base.flux.q == 0.75
        assert spec.base.flux.eta == pytest.approx(0.02 ** 2)
        assert spec.base.run_id == "contraction"
        assert spec.params == {"pairs": 20, "seed": 0, "perturbation": 0.5}

    def test_nested_groups_flatten(self):
        text = '{\n  "preset": "decay_fit",\n  "flux": {"q": 0.8, "eta": 0.001},\n  "time": {"end": 50.0}\n}'
        spec = parse_config_text(text)
        assert spec.base.flux.q == 0.8
        assert spec.base.flux.eta == 0.001
        assert spec.base.t_end == 50.0
        assert spec.values["flux.q"] == 0.8

    def test_one_spacing_applies_to_every_axis(self):
        spec = parse_config_text(_text(preset="sandwich", **{"grid.half_width": [2.0, 3.0], "grid.spacing": 0.1,
                                                              "flux.q": 0.8}))
        assert spec.base.grid.spacing == (0.1, 0.1)
        assert spec.base.grid.dim == 2

    def test_norms_accept_inf(self):
        spec = parse_config_text(_text(preset="decay_fit", **{"params.norms": [1, 2, "inf"]}))
        assert spec.params["norms"] == [1.0, 2.0, math.inf]
        assert spec.to_dict()["params.norms"] == [1.0, 2.0, "inf"]

    def test_to_dict_round_trips(self):
        spec = parse_config_text(_text(preset="energy_report", **{"params.taus": [0.1, 0.5]}))
        stored = spec.to_dict()
        assert "flux.eta" not in stored and "output" not in stored
        again = parse_config_text(json.dumps(stored))
        assert again.values == spec.values
        assert again.base.config_hash() == spec.base.config_hash()

    def test_unknown_key_points_at_its_line(self):
        text = '{\n  "preset": "sandwich",\n  "params.widths": [0.1]\n}'
        with pytest.raises(ConfigError, match="unknown key 'params.widths'") as info:
            parse_config_text(text)
        assert info.value.line == 3
        assert info.value.key == "params.widths"
        assert str(info.value).startswith("line 3:")

    def test_duplicate_key_points_at_second_occurrence(self):
        text = '{\n  "preset": "sandwich",\n  "mass": 1.0,\n  "mass": 2.0\n}'
        with pytest.raises(ConfigError, match="duplicate key 'mass'") as info:
            parse_config_text(text)
        assert info.value.line == 4

    def test_duplicate_between_flat_and_nested(self):
        text = '{\n  "preset": "sandwich",\n  "flux.q": 0.8,\n  "flux": {"q": 0.9}\n}'
        with pytest.raises(ConfigError, match="duplicate key 'flux.q'"):
            parse_config_text(text)

    def test_rejects_q_below_range_in_two_dimensions(self):
        text = ('{\n  "preset": "selfsim_collapse",\n  "grid.half_width": [4.0, 4.0],\n'
                '  "grid.spacing": [0.1],\n  "flux.q": 0.4\n}')
        with pytest.raises(ConfigError, match="q > 1 - 1/N") as info:
            parse_config_text(text)
        assert info.value.line == 5

    @pytest.mark.parametrize("key,value,match", [
        ("flux.q", "fast", "expects float"),
        ("solver.max_iter", 10.5, "expects int"),
        ("flux.enabled", 1, "expects bool"),
        ("params.norms", [0.5], "expects norms"),
    ])
    def test_type_errors(self, key, value, match):
        with pytest.raises(ConfigError, match=match):
            parse_config_text(_text(preset="decay_fit", **{key: value}))

    def test_range_errors_name_their_group(self):
        text = '{\n  "preset": "sandwich",\n  "solver.cfl": 1.5\n}'
        with pytest.raises(ConfigError, match="cfl") as info:
            parse_config_text(text)
        assert info.value.line == 3

    def test_preset_errors(self):
        with pytest.raises(ConfigError, match="missing required key 'preset'"):
            parse_config_text('{"mass": 1.0}')
        with pytest.raises(ConfigError, match="unknown preset 'nope'"):
            parse_config_text('{"preset": "nope"}')
        with pytest.raises(ValueError, match="Unknown preset"):
            get_preset("nope")

    def test_structure_errors(self):
        with pytest.raises(ConfigError, match="invalid JSON") as info:
            parse_config_text('{\n  "preset": "sandwich",\n  "mass": \n}')
        assert info.value.line == 4
        with pytest.raises(ConfigError, match="JSON object"):
            parse_config_text("[1, 2]")
        with pytest.raises(ConfigError, match="deeper than two levels"):
            parse_config_text('{"preset": "sandwich", "flux": {"q": {"value": 0.8}}}')

    def test_parse_config_reads_files(self, tmp_path):
        path = tmp_path / "exp.json"
        path.write_text(_text(preset="sandwich", output="custom"))
        spec = parse_config(path)
        assert spec.source == path
        assert spec.output == "custom"
        with pytest.raises(ConfigError, match="cannot read"):
            parse_config(tmp_path / "missing.json")


class TestPlanning:
    """Test that presets build valid run groups before anything runs."""

    @pytest.mark.parametrize("path", sorted(CONFIG_DIR.glob("*.json")), ids=lambda p: p.stem)
    def test_shipped_configs_plan(self, path):
        spec = parse_config(path)
        groups = plan(spec)
        assert groups and all(groups)
        names = [cfg.run_id for group in groups for cfg in group]
        assert len(set(names)) == len(names)

    def test_every_preset_has_a_shipped_config(self):
        shipped = {parse_config(p).preset for p in CONFIG_DIR.glob("*.json")}
        assert shipped == set(PRESETS)

    def test_invalid_parameters_are_config_errors(self):
        spec = parse_config_text(_text(preset="uniqueness", **{"params.t_star": 5.0}))
        with pytest.raises(ConfigError, match="t_star"):
            plan(spec)
        spec = parse_config_text(_text(preset="heat_baseline", **{"params.spacings": [0.01, 0.02]}))
        with pytest.raises(ConfigError, match="decreasing"):
            plan(spec)

    def test_unresolved_mollifier_is_rejected(self):
        spec = parse_config_text(_text(preset="sign_preservation", **{"params.widths": [0.4, 0.1]}))
        with pytest.raises(ConfigError, match="unresolvable"):
            plan(spec)

    def test_groups_share_discretization(self):
        spec = parse_config(CONFIG_DIR / "contraction.json")
        for group in plan(spec):
            first, second = group
            assert first.grid == second.grid
            assert first.initial_field is not None and second.initial_field is not None

    def test_uniqueness_plans_floor_run(self):
        spec = parse_config(CONFIG_DIR / "uniqueness.json")
        assert spec.base.operator.kind == "reduced"
        groups = plan(spec)
        (floor,) = groups[-1]
        assert floor.run_id == "unique-floor"
        assert floor.operator.kind == "full"
        assert not floor.flux.enabled
        assert floor.initial.kind == "heat_kernel"
        assert floor.grid.spacing == (0.01,)
        assert floor.theta == 0.5
        assert floor.t_end == spec.params["t_star"]
        assert all(len(group) == 2 for group in groups[:-1])

    def test_uniqueness_without_floor_spacing_has_no_floor_run(self):
        spec = parse_config_text(_text(preset="uniqueness"))
        names = [cfg.run_id for group in plan(spec) for cfg in group]
        assert "unique-floor" not in names

    def test_entropy_audit_config_is_pure_conservation_law(self):
        spec = parse_config(CONFIG_DIR / "entropy_audit.json")
        (cfg,) = plan(spec)[0]
        assert cfg.grid.dim == 1
        assert cfg.operator.kind == "reduced"
        assert cfg.record_steps
