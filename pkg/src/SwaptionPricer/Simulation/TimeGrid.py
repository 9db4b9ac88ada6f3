from dataclasses import dataclass
from dataclasses import field

import numpy as np

################################################################################


_ON_GRID_TOL = 1e-9


@dataclass(frozen=True)
class TimeGrid:
    """Uniform partition 0 = t_0 < ... < t_N = t_end."""

    t_end: float
    n_steps: int
    dt: float = field(init=False)

    # Exceptions
    class OffGrid(ValueError):
        pass

    def __post_init__(self):
        if self.n_steps < 1:
            raise ValueError(f"n_steps must be >= 1, got {self.n_steps}")
        if not self.t_end > 0.0:
            raise ValueError(f"t_end must be positive, got {self.t_end}")
        object.__setattr__(self, "dt", self.t_end / self.n_steps)

    @classmethod
    def with_step(cls, t_end: float, dt: float) -> "TimeGrid":
        n_steps = int(round(t_end / dt))
        grid = cls(t_end, n_steps)
        if abs(grid.dt - dt) > _ON_GRID_TOL:
            raise TimeGrid.OffGrid(f"dt={dt} does not divide t_end={t_end}")
        return grid

    @property
    def points(self) -> np.ndarray:
        return np.arange(self.n_steps + 1) * self.dt

    def time(self, k: int) -> float:
        return k * self.dt

    def index_of(self, t: float) -> int:
        k = int(round(t / self.dt))
        if k < 0 or k > self.n_steps or abs(k * self.dt - t) > _ON_GRID_TOL:
            raise TimeGrid.OffGrid(
                f"t={t} is not a point of the grid with dt={self.dt:g} "
                f"on [0, {self.t_end:g}]"
            )
        return k

    def indices_of(self, dates) -> list[int]:
        return [self.index_of(float(t)) for t in dates]
