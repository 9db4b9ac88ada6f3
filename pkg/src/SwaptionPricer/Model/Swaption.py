from dataclasses import dataclass
from enum import Enum

import numpy as np

from SwaptionPricer.Simulation.TimeGrid import TimeGrid

################################################################################


class ExerciseStyle(str, Enum):
    EUROPEAN = "european"
    BERMUDAN = "bermudan"


@dataclass(frozen=True)
class SwaptionSpec:
    """Payer swaption on the tenor T_0 < ... < T_n with fixed rate K.

    European swaptions exercise at T_0 only; Bermudan ones at any T_m.
    """

    tenor: tuple[float, ...]
    fixed_rate: float
    style: ExerciseStyle = ExerciseStyle.EUROPEAN

    # Exceptions
    class Invalid(ValueError):
        pass

    def __post_init__(self):
        tenor = tuple(float(t) for t in self.tenor)
        object.__setattr__(self, "tenor", tenor)
        object.__setattr__(self, "style", ExerciseStyle(self.style))
        if len(tenor) < 2:
            raise SwaptionSpec.Invalid("tenor needs T_0 < T_1 at least")
        if tenor[0] <= 0.0:
            raise SwaptionSpec.Invalid(f"T_0 must be positive, got {tenor[0]}")
        if any(b <= a for a, b in zip(tenor, tenor[1:])):
            raise SwaptionSpec.Invalid(f"tenor must increase: {tenor}")
        if self.fixed_rate < 0.0:
            raise SwaptionSpec.Invalid(
                f"fixed rate must be >= 0, got {self.fixed_rate}"
            )

    @property
    def n(self) -> int:
        return len(self.tenor) - 1

    @property
    def accruals(self) -> np.ndarray:
        """Delta T_m = T_m - T_{m-1} for m = 1..n."""
        return np.diff(np.asarray(self.tenor))

    def exercise_indices(self, grid: TimeGrid) -> list[int]:
        return grid.indices_of(self.tenor)

    def with_style(self, style: ExerciseStyle) -> "SwaptionSpec":
        return SwaptionSpec(self.tenor, self.fixed_rate, style)
