import numpy as np

from SwaptionPricer.Model.Cheyette import CheyetteParams
from SwaptionPricer.Model.Swaption import ExerciseStyle
from SwaptionPricer.Model.Swaption import SwaptionSpec
from SwaptionPricer.NN.Network import ArchSpec
from SwaptionPricer.NN.Network import init_network
from SwaptionPricer.NN.Network import Network
from SwaptionPricer.Pricers.Payoffs import european_terminal
from SwaptionPricer.Pricers.Training import fit_interval
from SwaptionPricer.Pricers.Training import INIT_KEY
from SwaptionPricer.Pricers.Training import PATHS_KEY
from SwaptionPricer.Pricers.Training import TrainConfig
from SwaptionPricer.Pricers.Training import TrainTrace
from SwaptionPricer.Pricers.Training import truncated_grid
from SwaptionPricer.Simulation.Paths import RngSpec
from SwaptionPricer.Simulation.Paths import simulate_paths
from SwaptionPricer.Simulation.TimeGrid import TimeGrid
import SwaptionPricer.Util.Logs as Logs

################################################################################


def check_input_width(arch: ArchSpec, params: CheyetteParams) -> None:
    if arch.input_width != 2 * params.d + 1:
        raise ValueError(
            f"{arch.label} takes {arch.input_width} inputs, "
            f"a {params.d}-factor model needs {2 * params.d + 1}"
        )


def price_at_origin(net: Network, d: int) -> tuple[float, float]:
    """V(0, 0, 0) and its batch standard error.

    Every path starts at the zero state, so the error is always 0.0; run-to-run
    spread is measured by independent runs instead.
    """
    value = net.forward(np.zeros((1, 2 * d + 1))).data
    return float(value.reshape(-1)[0]), 0.0


def train_european(
    params: CheyetteParams,
    spec: SwaptionSpec,
    grid: TimeGrid,
    arch: ArchSpec,
    cfg: TrainConfig,
) -> TrainTrace:
    """One network on [0, T_0], fitted to the payoff at T_0."""
    if spec.style is not ExerciseStyle.EUROPEAN:
        raise SwaptionSpec.Invalid("train_european needs a European swaption")
    check_input_width(arch, params)
    rng = RngSpec(cfg.seed)
    k0 = grid.index_of(spec.tenor[0])
    until_expiry = truncated_grid(grid, k0)
    net = init_network(arch, rng.derive(INIT_KEY))

    def sampler(epoch: int):
        return simulate_paths(
            params, until_expiry, cfg.batch_size, rng.derive(PATHS_KEY, epoch)
        )

    def terminal(paths):
        return european_terminal(params, spec, paths)

    trace = TrainTrace()
    fit_interval(
        net, params, sampler, 0, k0, terminal, cfg.epochs, cfg, trace
    )
    trace.final_price, trace.final_stderr = price_at_origin(net, params.d)
    trace.networks = [net]
    Logs.user(
        f"{arch.label}: price {trace.final_price:.6f} after {cfg.epochs} "
        f"epochs, loss {trace.final_loss:.3e}"
    )
    return trace
