"""Tests for experiment configuration loading."""
import json

import pytest

from adlab.exceptions import ConfigInvalid
from adlab.schema import TASK_ORDER, ExperimentConfig, OutputSpec, load_config, parse_config


class TestParseConfig:
    def test_defaults(self, schwinger_config_data):
        """Omitted fields take their documented defaults."""
        del schwinger_config_data["output"]
        config = parse_config(schwinger_config_data)
        assert config.tasks == list(TASK_ORDER)
        assert config.output.format == "csv"
        assert config.output.precision == 12
        assert config.integrator == "midpoint"
        assert not config.richardson

    def test_output_directory_from_environment(self, monkeypatch):
        """ADLAB_OUTPUT_DIR provides the default output directory."""
        monkeypatch.setenv("ADLAB_OUTPUT_DIR", "/tmp/elsewhere")
        assert OutputSpec().directory == "/tmp/elsewhere"

    def test_too_few_steps(self, schwinger_config_data):
        """steps = 2 is rejected with the field path."""
        schwinger_config_data["grid"]["steps"] = 2
        with pytest.raises(ConfigInvalid) as exc:
            parse_config(schwinger_config_data)
        assert exc.value.field_path == "grid.steps"

    def test_non_positive_duration(self, schwinger_config_data):
        """t_end must be positive."""
        schwinger_config_data["grid"]["t_end"] = 0
        with pytest.raises(ConfigInvalid) as exc:
            parse_config(schwinger_config_data)
        assert exc.value.field_path == "grid.t_end"

    def test_unknown_task(self, schwinger_config_data):
        """Tasks outside the known set are rejected."""
        schwinger_config_data["tasks"] = ["propagate", "plot"]
        with pytest.raises(ConfigInvalid) as exc:
            parse_config(schwinger_config_data)
        assert exc.value.field_path.startswith("tasks")

    def test_matrix_file_needs_path(self, schwinger_config_data):
        """A matrix_file model without a path is invalid."""
        schwinger_config_data["model"] = {"name": "matrix_file"}
        with pytest.raises(ConfigInvalid) as exc:
            parse_config(schwinger_config_data)
        assert exc.value.field_path == "model"

    def test_sweep_values_must_be_finite(self, schwinger_config_data):
        """Infinite sweep values are rejected."""
        schwinger_config_data["sweep"] = {"param": "omega", "values": [0.1, float("inf")]}
        with pytest.raises(ConfigInvalid) as exc:
            parse_config(schwinger_config_data)
        assert exc.value.field_path == "sweep.values"

    def test_sweep_task_requires_section(self, schwinger_config_data):
        """Requesting 'sweep' without a sweep section is invalid."""
        schwinger_config_data["tasks"] = ["fidelity", "sweep"]
        with pytest.raises(ConfigInvalid):
            parse_config(schwinger_config_data)


class TestTaskClosure:
    def test_dependencies_are_added(self, schwinger_config_data):
        """epsilon_bound pulls in decompose and propagate, in execution order."""
        schwinger_config_data["tasks"] = ["epsilon_bound"]
        assert parse_config(schwinger_config_data).ordered_tasks() == ["propagate", "decompose", "epsilon_bound"]

    def test_sweep_is_not_a_pipeline_task(self, schwinger_config_data):
        """'sweep' modifies the run but is not executed as a step."""
        schwinger_config_data["tasks"] = ["fidelity", "sweep"]
        schwinger_config_data["sweep"] = {"param": "omega", "values": [0.2]}
        assert parse_config(schwinger_config_data).ordered_tasks() == ["propagate", "fidelity"]


class TestSweepPoints:
    def test_model_parameter_sweep(self, schwinger_config_data):
        """Each point overrides one model parameter and drops the sweep."""
        schwinger_config_data["sweep"] = {"param": "omega", "values": [0.2, 0.1, 0.05]}
        points = list(parse_config(schwinger_config_data).sweep_points())
        assert [label for label, _ in points] == ["omega=0.2", "omega=0.1", "omega=0.05"]
        assert points[2][1].model.params["omega"] == 0.05
        assert points[2][1].model.params["b"] == 1.0
        assert all(config.sweep is None for _, config in points)

    def test_grid_sweep(self, schwinger_config_data):
        """Sweeping 'steps' keeps it an integer."""
        schwinger_config_data["sweep"] = {"param": "steps", "values": [100, 200]}
        _, config = list(parse_config(schwinger_config_data).sweep_points())[1]
        assert config.grid.steps == 200
        assert isinstance(config.grid.steps, int)


class TestLoadConfig:
    def test_round_trip(self, tmp_path, schwinger_config_data):
        """A JSON file loads into an ExperimentConfig."""
        path = tmp_path / "config.json"
        path.write_text(json.dumps(schwinger_config_data))
        assert isinstance(load_config(path), ExperimentConfig)

    def test_bad_json(self, tmp_path):
        """Malformed JSON is a config error with its location."""
        path = tmp_path / "broken.json"
        path.write_text('{"model": ')
        with pytest.raises(ConfigInvalid) as exc:
            load_config(path)
        assert exc.value.field_path == "<file>"

    def test_missing_file(self, tmp_path):
        """A missing config is a config error."""
        with pytest.raises(ConfigInvalid):
            load_config(tmp_path / "absent.json")
