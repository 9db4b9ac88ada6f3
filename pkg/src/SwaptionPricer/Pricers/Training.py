"""Deep-BSDE training on one interval of the time grid.

A network V(x, y, t) is evaluated at the grid points k_lo..k_hi of a path
batch. Its input gradient feeds the one-step Euler propagation

    V~^{k+1} = V^k + r^k V^k dt + grad_X V^k . (eta * dW^k)

and the loss is sum_j sum_{k=k_lo+1}^{k_hi} (V^k - V~^k)^2
               + sum_j (V^{k_hi} - target)^2.
"""

import math
from dataclasses import dataclass
from dataclasses import field
from typing import Callable

import numpy as np
import pandas as pd

from SwaptionPricer.Model.Cheyette import CheyetteParams
from SwaptionPricer.NN.Adam import adam_step
from SwaptionPricer.NN.Adam import AdamState
from SwaptionPricer.NN.Adam import LrSchedule
from SwaptionPricer.NN.Network import grad_params
from SwaptionPricer.NN.Network import Network
from SwaptionPricer.NN.Tensor import Tensor
from SwaptionPricer.Pricers.IPricer import IPricer
from SwaptionPricer.Pricers.Payoffs import short_rates
from SwaptionPricer.Simulation.Paths import PathBatch
from SwaptionPricer.Simulation.TimeGrid import TimeGrid
import SwaptionPricer.Util.Logs as Logs

################################################################################


# RngSpec.derive namespaces
PATHS_KEY = 0
INIT_KEY = 1
EVAL_KEY = 2


@dataclass(frozen=True)
class TrainConfig:
    epochs: int
    batch_size: int = 100
    seed: int = 0
    fresh_paths: bool = True
    network_epochs: int | None = None
    warm_start: bool = False
    log_every: int = 50
    rates: tuple[float, ...] = (1e-2, 1e-3, 1e-4, 1e-5)

    def __post_init__(self):
        if self.batch_size < 1:
            raise ValueError(f"batch size must be >= 1: {self.batch_size}")
        LrSchedule(self.epochs, self.rates)
        if self.network_epochs is not None:
            LrSchedule(self.network_epochs, self.rates)

    def epochs_per_network(self, networks: int) -> int:
        if self.network_epochs is not None:
            return self.network_epochs
        per_network = self.epochs // networks
        LrSchedule(per_network, self.rates)
        return per_network


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    price: float
    loss: float
    lr: float
    network: int | None = None


@dataclass(eq=False)
class TrainTrace:
    records: list[EpochRecord] = field(default_factory=list)
    final_price: float = math.nan
    # the price is V at the single state (0, 0, 0): its batch error is 0.0
    final_stderr: float = math.nan
    networks: list[Network] = field(default_factory=list)
    # network -> RMS of V - target at the interval end, on a fresh batch
    fit_errors: dict[int, float] = field(default_factory=dict)

    @property
    def final_loss(self) -> float:
        return self.records[-1].loss if self.records else math.nan

    def network_records(self, network: int | None) -> list[EpochRecord]:
        return [r for r in self.records if r.network == network]

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(
            {
                "epoch": [r.epoch for r in self.records],
                "price": [r.price for r in self.records],
                "loss": [r.loss for r in self.records],
                "lr": [r.lr for r in self.records],
            }
        )
        if any(r.network is not None for r in self.records):
            frame.insert(0, "network", [r.network for r in self.records])
        return frame


@dataclass(frozen=True)
class RunSummary:
    price: float
    stderr: float
    half_width: float | None
    runs: int


def price_from_traces(traces: list[TrainTrace]) -> RunSummary:
    """Mean terminal price over independent runs with a 95% band."""
    finals = np.array([t.final_price for t in traces], dtype=np.float64)
    if finals.size == 0:
        raise ValueError("no runs to summarize")
    if finals.size == 1:
        Logs.warning("single run: confidence band is undefined")
        return RunSummary(float(finals[0]), math.nan, None, 1)
    stderr = float(finals.std(ddof=1) / math.sqrt(finals.size))
    return RunSummary(float(finals.mean()), stderr, 1.96 * stderr, finals.size)


def epochs_to_threshold(
    trace: TrainTrace, threshold: float, network: int | None = None
) -> int | None:
    """Number of epochs network needed before its price reached threshold."""
    for count, record in enumerate(trace.network_records(network), start=1):
        if record.price >= threshold:
            return count
    return None


def chain_epochs_to_threshold(trace: TrainTrace, threshold: float) -> int | None:
    """Epochs of a Bermudan chain until the price reached threshold.

    Networks n..1 are trained in full before network 0 gives a price, so
    their epochs count too.
    """
    count = epochs_to_threshold(trace, threshold, 0)
    if count is None:
        return None
    return len(trace.records) - len(trace.network_records(0)) + count


################################################################################


def truncated_grid(grid: TimeGrid, k_end: int) -> TimeGrid:
    """The first k_end steps of grid, with the same dt."""
    return TimeGrid(grid.time(k_end), k_end) if k_end > 0 else grid


def interval_loss(
    net: Network,
    params: CheyetteParams,
    paths: PathBatch,
    k_lo: int,
    k_hi: int,
    target: np.ndarray,
) -> tuple[Tensor, Tensor]:
    """Loss on grid points k_lo..k_hi and the network values [K x M]."""
    d, m_paths, dt = params.d, paths.m_paths, paths.grid.dt
    inputs = paths.network_inputs(k_lo, k_hi)
    n_points = inputs.shape[0]
    values, grads = net.forward_with_input_grad(
        inputs.reshape(n_points * m_paths, -1), range(d)
    )
    v = values.reshape(n_points, m_paths)
    grad_x = grads.reshape(n_points, m_paths, d)

    terminal = v[n_points - 1] - target
    loss = (terminal * terminal).sum()
    if n_points > 1:
        rates = short_rates(params, paths, k_lo, k_hi - 1)
        shocks = np.swapaxes(paths.dw[:, k_lo:k_hi] * params.eta, 0, 1)
        v_prev = v[: n_points - 1]
        propagated = v_prev * (1.0 + rates * dt) + (
            grad_x[: n_points - 1] * shocks
        ).sum(axis=2)
        residual = v[1:] - propagated
        loss = loss + (residual * residual).sum()
    return loss, v


def fit_interval(
    net: Network,
    params: CheyetteParams,
    sampler: Callable[[int], PathBatch],
    k_lo: int,
    k_hi: int,
    target_fn: Callable[[PathBatch], np.ndarray],
    epochs: int,
    cfg: TrainConfig,
    trace: TrainTrace,
    network: int | None = None,
) -> None:
    """Adam with the quartered schedule; one fresh batch per epoch."""
    schedule = LrSchedule(epochs, cfg.rates)
    adam = AdamState.for_parameters(net.parameters())
    fixed = None if cfg.fresh_paths else sampler(0)
    tag = "" if network is None else f"network {network}, "

    for epoch in range(epochs):
        paths = sampler(epoch) if fixed is None else fixed
        lr = schedule.rate(epoch)
        loss, values = interval_loss(
            net, params, paths, k_lo, k_hi, target_fn(paths)
        )
        loss_value = loss.item()
        if not math.isfinite(loss_value):
            raise IPricer.TrainingDiverged(
                f"{tag}epoch {epoch}: loss={loss_value} at lr={lr:g}"
            )
        try:
            adam_step(adam, net.parameters(), grad_params(net, net.tape(loss)), lr)
        except AdamState.NonFiniteGradient as e:
            raise IPricer.TrainingDiverged(f"{tag}epoch {epoch}: {e}") from e

        price = float(values.data[0].mean())
        trace.records.append(EpochRecord(epoch, price, loss_value, lr, network))
        if cfg.log_every > 0 and epoch % cfg.log_every == 0:
            Logs.dev(
                f"{tag}epoch {epoch:5d}  lr={lr:.0e}  "
                f"price={price:.6f}  loss={loss_value:.3e}"
            )


def evaluate_at(net: Network, paths: PathBatch, k: int) -> np.ndarray:
    """Network values at grid point k for every path of the batch [M]."""
    inputs = paths.network_inputs(k, k)[0]
    return net.forward(inputs).data.reshape(paths.m_paths)


def terminal_fit_error(
    net: Network, paths: PathBatch, k: int, target: np.ndarray
) -> float:
    gap = evaluate_at(net, paths, k) - target
    return float(np.sqrt(np.mean(gap * gap)))
