"""Test configuration and fixtures."""
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from adlab.grid import TimeGrid
from adlab.models import SchwingerModel, SchwingerParams
from adlab.spectral import couplings, frames_from_closed_form, tracked_frames


@pytest.fixture(scope="session")
def schwinger_params():
    """The reference Schwinger point: b=1, θ=π/2, ω=0.1."""
    return SchwingerParams(b=1.0, theta=np.pi / 2, omega=0.1)


@pytest.fixture(scope="session")
def schwinger_model(schwinger_params):
    return SchwingerModel(schwinger_params)


@pytest.fixture(scope="session")
def loop_grid(schwinger_params):
    """One full drive period 2π/ω on an odd step count (t = T/2 is not a grid point)."""
    return TimeGrid(2 * np.pi / schwinger_params.omega, 20001)


@pytest.fixture(scope="session")
def short_grid():
    return TimeGrid(20.0, 20000)


@pytest.fixture(scope="session")
def loop_frames(schwinger_model, loop_grid):
    return tracked_frames(schwinger_model, loop_grid)


@pytest.fixture(scope="session")
def loop_couplings(loop_frames):
    return couplings(loop_frames)


@pytest.fixture(scope="session")
def tilted_params():
    """θ = π/3, where ⟨n(0)|n(t)⟩ never vanishes along the loop."""
    return SchwingerParams(b=1.0, theta=np.pi / 3, omega=0.1)


@pytest.fixture(scope="session")
def tilted_model(tilted_params):
    return SchwingerModel(tilted_params)


@pytest.fixture(scope="session")
def tilted_closed_form_frames(tilted_model, loop_grid):
    return frames_from_closed_form(tilted_model, loop_grid)


@pytest.fixture(scope="session")
def tilted_frames(tilted_model, loop_grid):
    return tracked_frames(tilted_model, loop_grid)


@pytest.fixture
def schwinger_config_data(tmp_path):
    """A small all-task Schwinger config writing into tmp_path."""
    return {
        "model": {"name": "schwinger", "params": {"b": 1.0, "theta": np.pi / 2, "omega": 0.1}},
        "grid": {"t_end": 20.0, "steps": 2000},
        "level": 0,
        "output": {"directory": str(tmp_path / "runs"), "format": "csv", "precision": 12},
    }
