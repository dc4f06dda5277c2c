"""Tests for matrix-file and callable models."""
import numpy as np
import pytest

from adlab.exceptions import NotHermitian, ParseError
from adlab.grid import TimeGrid
from adlab.models import (
    CallableModel,
    SampledModel,
    SchwingerModel,
    SchwingerParams,
    get_model,
    load_matrix_model,
    write_matrix_file,
)
from adlab.phases import open_path_adiabatic_phase, phase_report
from adlab.spectral import couplings, tracked_frames

SIGMA_X_FILE = """# constant sigma_x
2,3
0,0,0,1,0,1,0,0,0
1,0,0,1,0,1,0,0,0
2,0,0,1,0,1,0,0,0
"""


class TestLoadMatrixModel:
    def test_constant_sigma_x(self, tmp_path):
        """A constant σ_x file evaluates to σ_x everywhere in range."""
        path = tmp_path / "sx.csv"
        path.write_text(SIGMA_X_FILE)
        model = load_matrix_model(path)
        assert model.dimension == 2
        for t in (0.0, 0.25, 1.5, 2.0):
            assert np.allclose(model.evaluate(t), [[0, 1], [1, 0]])

    def test_malformed_row(self, tmp_path):
        """A non-numeric field raises ParseError with line and column."""
        path = tmp_path / "bad.csv"
        path.write_text(SIGMA_X_FILE.replace("1,0,0,1,0,1,0,0,0", "1,0,0,abc,0,1,0,0,0"))
        with pytest.raises(ParseError) as exc:
            load_matrix_model(path)
        assert exc.value.line == 4
        assert exc.value.column == 4

    def test_wrong_row_width(self, tmp_path):
        """A row with the wrong number of values raises ParseError."""
        path = tmp_path / "short.csv"
        path.write_text("2,2\n0,0,0,1,0\n1,0,0,1,0,1,0,0,0\n")
        with pytest.raises(ParseError) as exc:
            load_matrix_model(path)
        assert exc.value.line == 2

    def test_sample_count_mismatch(self, tmp_path):
        """The header's K must match the number of rows."""
        path = tmp_path / "count.csv"
        path.write_text("2,4\n0,0,0,1,0,1,0,0,0\n1,0,0,1,0,1,0,0,0\n")
        with pytest.raises(ParseError):
            load_matrix_model(path)

    def test_not_hermitian(self, tmp_path):
        """A non-Hermitian sample raises NotHermitian at its time."""
        path = tmp_path / "nh.csv"
        path.write_text("2,2\n0,0,0,1,0,1,0,0,0\n1.5,0,0,1,0,0,0,0,0\n")
        with pytest.raises(NotHermitian) as exc:
            load_matrix_model(path)
        assert exc.value.t == 1.5

    def test_factory_requires_path(self):
        """matrix_file without a path is rejected."""
        with pytest.raises(ValueError):
            get_model("matrix_file")


class TestSampledModel:
    def test_linear_interpolation(self):
        """Midway between samples the matrix is the average."""
        model = SampledModel([0.0, 2.0], np.stack([np.diag([1.0, -1.0]), np.diag([3.0, -3.0])]))
        assert np.allclose(model.evaluate(1.0), np.diag([2.0, -2.0]))

    def test_out_of_range(self):
        """Evaluating outside the sampled window is an error."""
        model = SampledModel([0.0, 1.0], np.stack([np.eye(2), np.eye(2)]))
        with pytest.raises(ValueError):
            model.evaluate(1.5)

    def test_callable_model(self):
        """CallableModel evaluates its function and stacks many times."""
        model = CallableModel(lambda t: np.diag([t, -t]), 2)
        assert np.allclose(model.evaluate_many([1.0, 2.0])[1], np.diag([2.0, -2.0]))

    def test_sampled_schwinger_reproduces_open_path_phase(self, tmp_path):
        """Phases from a sampled Schwinger file match the analytic model to 1e-5."""
        params = SchwingerParams(b=1.0, theta=np.pi / 3, omega=0.1)
        analytic = SchwingerModel(params)
        grid = TimeGrid(10.0, 10000)
        path = write_matrix_file(analytic, grid.times, tmp_path / "schwinger.csv")
        sampled = load_matrix_model(path)

        expected = open_path_adiabatic_phase(tracked_frames(analytic, grid), 0)
        # Without a closed-form reference the +b level is the second eigh column
        frames = tracked_frames(sampled, grid)
        assert frames[0].energies[1] == pytest.approx(1.0)
        assert np.max(np.abs(open_path_adiabatic_phase(frames, 1) - expected)) < 1e-5

    def test_sampled_schwinger_reproduces_phase_report(self, tmp_path):
        """The +b level of a sampled file gives the analytic level-0 phase report."""
        analytic = SchwingerModel(SchwingerParams(b=1.0, theta=np.pi / 3, omega=0.1))
        grid = TimeGrid(10.0, 10000)
        sampled = load_matrix_model(write_matrix_file(analytic, grid.times, tmp_path / "schwinger.csv"))

        analytic_frames = tracked_frames(analytic, grid)
        sampled_frames = tracked_frames(sampled, grid)
        expected = phase_report(analytic_frames, couplings(analytic_frames), 0)
        report = phase_report(sampled_frames, couplings(sampled_frames), 1)
        for column in ("delta", "gamma", "Q", "geom_openpath", "phi_corrected"):
            assert np.max(np.abs(getattr(report, column) - getattr(expected, column))) < 1e-5, column
