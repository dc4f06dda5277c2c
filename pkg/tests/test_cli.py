"""Tests for the adlab command line."""
import json

import pytest

from adlab.cli import EXIT_CONFIG, EXIT_OK, EXIT_TASK, main
from adlab.exceptions import StepTooLarge, TaskFailed


@pytest.fixture
def config_path(tmp_path, schwinger_config_data):
    schwinger_config_data["tasks"] = ["propagate"]
    path = tmp_path / "config.json"
    path.write_text(json.dumps(schwinger_config_data))
    return path


class TestValidate:
    def test_valid_config(self, config_path):
        """A valid config exits 0."""
        assert main(["validate", "--config", str(config_path)]) == EXIT_OK

    def test_invalid_config(self, tmp_path, schwinger_config_data):
        """steps = 2 exits with the config error code."""
        schwinger_config_data["grid"]["steps"] = 2
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(schwinger_config_data))
        assert main(["validate", "--config", str(path)]) == EXIT_CONFIG

    def test_level_checked_against_model(self, tmp_path, schwinger_config_data):
        """validate builds the model, so level >= N is caught."""
        schwinger_config_data["level"] = 5
        path = tmp_path / "level.json"
        path.write_text(json.dumps(schwinger_config_data))
        assert main(["validate", "--config", str(path)]) == EXIT_CONFIG


class TestRun:
    def test_run_with_overrides(self, config_path, tmp_path):
        """--out and --format override the config's output section."""
        out = tmp_path / "override"
        assert main(["run", "--config", str(config_path), "--out", str(out), "--format", "json"]) == EXIT_OK
        assert (out / "trajectory.json").exists()
        assert (out / "manifest.json").exists()

    def test_task_failure_exit_code(self, config_path, mocker):
        """A failing task exits 3."""
        mocker.patch("adlab.pipeline.steps.propagate.propagate_exact", side_effect=StepTooLarge(1.0, 1.0, 0.5))
        assert main(["run", "--config", str(config_path)]) == EXIT_TASK

    def test_failed_sweep_points_exit_code(self, config_path, mocker):
        """Failed sweep points also exit 3."""
        runner = mocker.patch("adlab.cli.PipelineRunner")
        runner.return_value.run.return_value = ([], {"successful": 1, "failed": 1, "skipped": 0})
        runner.return_value.failures = [TaskFailed("fidelity", ValueError("boom"), "omega=0.2")]
        assert main(["run", "--config", str(config_path)]) == EXIT_TASK

    def test_missing_config(self, tmp_path):
        """A missing config file exits 2."""
        assert main(["run", "--config", str(tmp_path / "nope.json")]) == EXIT_CONFIG


class TestMatrixFileErrors:
    @pytest.fixture
    def matrix_config(self, tmp_path, schwinger_config_data):
        def write(matrix_path):
            schwinger_config_data["model"] = {"name": "matrix_file", "params": {}, "path": str(matrix_path)}
            schwinger_config_data["grid"] = {"t_end": 1.0, "steps": 10}
            path = tmp_path / "matrix.json"
            path.write_text(json.dumps(schwinger_config_data))
            return str(path)
        return write

    @pytest.mark.parametrize("command", ["validate", "run"])
    def test_malformed_matrix_file(self, tmp_path, matrix_config, command):
        """A non-numeric matrix entry is a config error, not a crash."""
        matrix = tmp_path / "bad.csv"
        matrix.write_text("2,2\n0,0,0,1,0,1,0,0,0\n1,0,0,abc,0,1,0,0,0\n")
        assert main([command, "--config", matrix_config(matrix)]) == EXIT_CONFIG

    @pytest.mark.parametrize("command", ["validate", "run"])
    def test_missing_matrix_file(self, tmp_path, matrix_config, command):
        """A matrix path that does not exist exits 2."""
        assert main([command, "--config", matrix_config(tmp_path / "absent.csv")]) == EXIT_CONFIG

    def test_non_hermitian_matrix_file(self, tmp_path, matrix_config):
        """A non-Hermitian sample exits 2."""
        matrix = tmp_path / "nh.csv"
        matrix.write_text("2,2\n0,0,0,1,0,1,0,0,0\n1,0,0,1,0,0,0,0,0\n")
        assert main(["validate", "--config", matrix_config(matrix)]) == EXIT_CONFIG
