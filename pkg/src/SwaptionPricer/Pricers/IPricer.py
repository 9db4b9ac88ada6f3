from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

from SwaptionPricer.Simulation.Paths import RngSpec

if TYPE_CHECKING:
    from SwaptionPricer.Pricers.Training import TrainTrace
    from SwaptionPricer.Util.ExperimentConfig import ExperimentConfig

################################################################################


@dataclass(eq=False)
class RunResult:
    run_id: int
    seed: int
    price: float
    stderr: float = math.nan
    final_loss: float = math.nan
    n_paths: int | None = None
    degree: int | None = None
    trace: TrainTrace | None = None


class IPricer:
    # Exceptions
    class TrainingDiverged(RuntimeError):
        pass

    class Unsupported(ValueError):
        pass

    # API
    def init(self, config: ExperimentConfig) -> None:
        raise NotImplementedError

    def run(self, run_id: int, rng: RngSpec) -> RunResult:
        raise NotImplementedError

    def param_count(self) -> int | None:
        return None
