import math

import numpy as np

from SwaptionPricer.Curve.DiscountCurve import DiscountCurve
from SwaptionPricer.Model.Cheyette import CheyetteParams
from SwaptionPricer.Model.Swaption import ExerciseStyle
from SwaptionPricer.Model.Swaption import SwaptionSpec
from SwaptionPricer.Pricers.IPricer import IPricer
from SwaptionPricer.Pricers.IPricer import RunResult
from SwaptionPricer.Pricers.Payoffs import european_terminal
from SwaptionPricer.Pricers.Payoffs import pathwise_discount
from SwaptionPricer.Pricers.Training import truncated_grid
from SwaptionPricer.Simulation.Paths import iter_path_blocks
from SwaptionPricer.Simulation.Paths import RngSpec
from SwaptionPricer.Simulation.TimeGrid import TimeGrid
import SwaptionPricer.Util.Logs as Logs

################################################################################


def mc_price_european(
    params: CheyetteParams,
    spec: SwaptionSpec,
    grid: TimeGrid,
    n_paths: int,
    rng: RngSpec,
) -> tuple[float, float]:
    """Sample mean of the pathwise discounted payoff at T_0 and its stderr."""
    if spec.style is not ExerciseStyle.EUROPEAN:
        raise SwaptionSpec.Invalid("Monte-Carlo pricing needs a European swaption")
    k0 = grid.index_of(spec.tenor[0])
    discounted = np.concatenate(
        [
            pathwise_discount(params, block, k0)
            * european_terminal(params, spec, block)
            for block in iter_path_blocks(
                params, truncated_grid(grid, k0), n_paths, rng
            )
        ]
    )
    stderr = (
        float(discounted.std(ddof=1) / math.sqrt(n_paths)) if n_paths > 1 else 0.0
    )
    return float(discounted.mean()), stderr


def analytic_k0_price(curve: DiscountCurve, spec: SwaptionSpec) -> float:
    """P(0, T_0) - P(0, T_n): the K = 0 swaption pays 1 - P(T_0, T_n)."""
    if spec.fixed_rate != 0.0:
        raise IPricer.Unsupported(
            f"closed form holds for K = 0 only, got K = {spec.fixed_rate}"
        )
    return float(curve.discount(spec.tenor[0]) - curve.discount(spec.tenor[-1]))


################################################################################


class MonteCarloPricer(IPricer):
    def init(self, config) -> None:
        self.params = config.model_params()
        self.spec = config.swaption()
        self.grid = config.time_grid()
        self.n_paths = config.mc.n_paths
        if self.spec.style is not ExerciseStyle.EUROPEAN:
            raise IPricer.Unsupported("method 'mc' prices European swaptions only")

    def run(self, run_id: int, rng: RngSpec) -> RunResult:
        price, stderr = mc_price_european(
            self.params, self.spec, self.grid, self.n_paths, rng
        )
        Logs.user(
            f"run {run_id}: MC price {price:.6f} +- {stderr:.6f} "
            f"({self.n_paths} paths)"
        )
        return RunResult(
            run_id, rng.seed, price, stderr, n_paths=self.n_paths
        )
