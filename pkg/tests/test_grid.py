"""Tests for the uniform time grid."""
import numpy as np
import pytest

from adlab.grid import TimeGrid, index_of


class TestTimeGrid:
    def test_points(self):
        """steps + 1 points from 0 to t_end."""
        grid = TimeGrid(2.0, 4)
        assert np.allclose(grid.times, [0.0, 0.5, 1.0, 1.5, 2.0])
        assert grid.dt == 0.5
        assert len(grid) == 5

    @pytest.mark.parametrize("t_end,steps", [(1.0, 2), (0.0, 10), (-1.0, 10)])
    def test_invalid(self, t_end, steps):
        """Fewer than 3 steps or a non-positive duration is rejected."""
        with pytest.raises(ValueError):
            TimeGrid(t_end, steps)

    def test_refined_shares_points(self):
        """The refined grid contains every point of the original."""
        grid = TimeGrid(3.0, 6)
        assert np.allclose(grid.refined().times[::2], grid.times)

    def test_digest_is_stable(self):
        """Equal grids hash equally, different grids differently."""
        assert TimeGrid(1.0, 10).digest() == TimeGrid(1.0, 10).digest()
        assert TimeGrid(1.0, 10).digest() != TimeGrid(1.0, 11).digest()

    def test_index_of(self):
        """index_of finds the nearest grid point."""
        assert index_of(TimeGrid(1.0, 10), 0.31) == 3
