"""Tests for the domain errors."""
from adlab.exceptions import (
    AdlabError,
    ConfigInvalid,
    NonHermitianInput,
    NotHermitian,
    PhaseUnwrapAmbiguous,
    TaskFailed,
)


class TestExceptions:
    def test_context_is_kept(self):
        """Errors keep the values that triggered them and mention them."""
        error = PhaseUnwrapAmbiguous(1, 2.5, 0.05)
        assert (error.level, error.t, error.magnitude) == (1, 2.5, 0.05)
        assert "2.5" in str(error)

    def test_hierarchy(self):
        """Every domain error derives from AdlabError; NotHermitian is a NonHermitianInput."""
        assert issubclass(NotHermitian, NonHermitianInput)
        assert issubclass(ConfigInvalid, AdlabError)

    def test_task_failed_wraps_cause(self):
        """TaskFailed names the task, the sweep point and the cause."""
        cause = ConfigInvalid("grid.steps", "too small")
        error = TaskFailed("propagate", cause, "omega=0.1")
        assert error.cause is cause
        assert "propagate" in str(error) and "omega=0.1" in str(error) and "grid.steps" in str(error)
