"""Backward chain of deep-BSDE networks for a Bermudan swaption.

Network m lives on [T_{m-1}, T_m] (T_{-1} = 0) and is fitted to
max(exercise value at T_m, network m+1 at T_m), with network m+1 frozen.
Network n ends at T_n where nothing is left to exercise. Each network reads
time from the start of its own interval.
"""

import numpy as np

from SwaptionPricer.Model.Cheyette import CheyetteParams
from SwaptionPricer.Model.Swaption import ExerciseStyle
from SwaptionPricer.Model.Swaption import SwaptionSpec
from SwaptionPricer.NN.Network import ArchSpec
from SwaptionPricer.NN.Network import init_network
from SwaptionPricer.NN.Network import Network
from SwaptionPricer.Pricers.EuropeanBSDE import check_input_width
from SwaptionPricer.Pricers.EuropeanBSDE import price_at_origin
from SwaptionPricer.Pricers.Payoffs import exercise_value
from SwaptionPricer.Pricers.Training import EVAL_KEY
from SwaptionPricer.Pricers.Training import evaluate_at
from SwaptionPricer.Pricers.Training import fit_interval
from SwaptionPricer.Pricers.Training import INIT_KEY
from SwaptionPricer.Pricers.Training import PATHS_KEY
from SwaptionPricer.Pricers.Training import terminal_fit_error
from SwaptionPricer.Pricers.Training import TrainConfig
from SwaptionPricer.Pricers.Training import TrainTrace
from SwaptionPricer.Pricers.Training import truncated_grid
from SwaptionPricer.Simulation.Paths import PathBatch
from SwaptionPricer.Simulation.Paths import RngSpec
from SwaptionPricer.Simulation.Paths import simulate_paths
from SwaptionPricer.Simulation.TimeGrid import TimeGrid
import SwaptionPricer.Util.Logs as Logs

################################################################################


def train_bermudan(
    params: CheyetteParams,
    spec: SwaptionSpec,
    grid: TimeGrid,
    arch: ArchSpec,
    cfg: TrainConfig,
) -> TrainTrace:
    if spec.style is not ExerciseStyle.BERMUDAN:
        raise SwaptionSpec.Invalid("train_bermudan needs a Bermudan swaption")
    check_input_width(arch, params)
    rng = RngSpec(cfg.seed)
    ks = spec.exercise_indices(grid)
    epochs = cfg.epochs_per_network(spec.n + 1)
    nets: list[Network | None] = [None] * (spec.n + 1)
    trace = TrainTrace()

    for m in range(spec.n, -1, -1):
        k_lo, k_hi = (ks[m - 1] if m > 0 else 0), ks[m]
        interval_grid = truncated_grid(grid, k_hi)
        frozen = nets[m + 1] if m < spec.n else None

        net = init_network(arch, rng.derive(INIT_KEY, m))
        if cfg.warm_start and frozen is not None:
            net.copy_parameters_from(frozen)
        net.time_origin = grid.time(k_lo)

        def sampler(epoch: int, m=m, interval_grid=interval_grid):
            return simulate_paths(
                params,
                interval_grid,
                cfg.batch_size,
                rng.derive(PATHS_KEY, m, epoch),
            )

        def target(paths: PathBatch, m=m, k=k_hi, frozen=frozen):
            payoff = exercise_value(params, spec, m, paths.x[:, k], paths.y[:, k])
            if frozen is None:
                return payoff
            return np.maximum(payoff, evaluate_at(frozen, paths, k))

        fit_interval(
            net, params, sampler, k_lo, k_hi, target, epochs, cfg, trace, m
        )
        nets[m] = net
        check = simulate_paths(
            params, interval_grid, cfg.batch_size, rng.derive(EVAL_KEY, m)
        )
        trace.fit_errors[m] = terminal_fit_error(net, check, k_hi, target(check))
        Logs.user(
            f"network {m} on [{grid.time(k_lo):g}, {grid.time(k_hi):g}] "
            f"trained, loss {trace.final_loss:.3e}, "
            f"terminal fit error {trace.fit_errors[m]:.2e}"
        )

    trace.final_price, trace.final_stderr = price_at_origin(nets[0], params.d)
    trace.networks = list(nets)
    Logs.user(
        f"{arch.label}: Bermudan price {trace.final_price:.6f} with "
        f"{spec.n + 1} networks x {epochs} epochs"
    )
    return trace
