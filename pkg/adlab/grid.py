import hashlib
from dataclasses import dataclass
from functools import cached_property

import numpy as np


@dataclass(frozen=True)
class TimeGrid:
    """Uniform time grid t_k = k·Δt, k = 0..steps, with Δt = t_end / steps."""
    t_end: float
    steps: int

    def __post_init__(self):
        if self.steps < 3:
            raise ValueError(f"A grid needs at least 3 steps, got {self.steps}")
        if not self.t_end > 0:
            raise ValueError(f"t_end must be positive, got {self.t_end}")

    @cached_property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.t_end, self.steps + 1)

    @property
    def dt(self) -> float:
        return self.t_end / self.steps

    def __len__(self) -> int:
        return self.steps + 1

    def refined(self) -> 'TimeGrid':
        """Grid with half the step, sharing every point of this one."""
        return TimeGrid(self.t_end, 2 * self.steps)

    def digest(self) -> str:
        """Stable hash of the sample points, recorded in run manifests."""
        return hashlib.sha1(self.times.tobytes()).hexdigest()


def index_of(grid: TimeGrid, t: float) -> int:
    """Index of the grid point closest to t."""
    return int(round(t / grid.dt))
