"""Longstaff-Schwartz regression pricer for Bermudan swaptions.

Paths are produced in blocks; only the factors X at the exercise dates, the
exercise values and the pathwise discount factors to each date are kept, so
the memory footprint is O(n_paths * n) instead of O(n_paths * N).
"""

import math
from dataclasses import dataclass
from itertools import combinations_with_replacement

import numpy as np
import scipy.linalg

from SwaptionPricer.Model.Cheyette import CheyetteParams
from SwaptionPricer.Model.Swaption import ExerciseStyle
from SwaptionPricer.Model.Swaption import SwaptionSpec
from SwaptionPricer.Pricers.IPricer import IPricer
from SwaptionPricer.Pricers.IPricer import RunResult
from SwaptionPricer.Pricers.Payoffs import bermudan_payoffs
from SwaptionPricer.Pricers.Payoffs import short_rates
from SwaptionPricer.Simulation.Paths import iter_path_blocks
from SwaptionPricer.Simulation.Paths import PathBatch
from SwaptionPricer.Simulation.Paths import RngSpec
from SwaptionPricer.Simulation.TimeGrid import TimeGrid
import SwaptionPricer.Util.Logs as Logs

################################################################################


@dataclass(frozen=True)
class LsConfig:
    degree: int = 1
    itm_only: bool = True
    n_paths: int = 100_000

    def __post_init__(self):
        if self.degree not in (1, 2):
            raise ValueError(f"regression degree must be 1 or 2: {self.degree}")
        if self.n_paths < 2:
            raise ValueError(f"n_paths must be >= 2: {self.n_paths}")

    def basis_size(self, d: int) -> int:
        return math.comb(d + self.degree, self.degree)


def regression_basis(x: np.ndarray, degree: int) -> np.ndarray:
    """Intercept and all monomials of the columns of x up to degree."""
    columns = [np.ones(x.shape[0])]
    for power in range(1, degree + 1):
        for combo in combinations_with_replacement(range(x.shape[1]), power):
            columns.append(np.prod(x[:, list(combo)], axis=1))
    return np.stack(columns, axis=1)


def least_squares(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    q, r = scipy.linalg.qr(a, mode="economic")
    diag = np.abs(np.diag(r))
    tol = max(a.shape) * np.finfo(np.float64).eps * (diag.max() if diag.size else 0.0)
    if diag.size == 0 or diag.max() == 0.0 or np.any(diag <= tol):
        Logs.warning(
            f"rank-deficient regression ({a.shape[0]} x {a.shape[1]}), "
            "falling back to the pseudo-inverse"
        )
        return scipy.linalg.pinv(a) @ b
    return scipy.linalg.solve_triangular(r, q.T @ b)


def ls_price_bermudan(
    params: CheyetteParams,
    spec: SwaptionSpec,
    grid: TimeGrid,
    cfg: LsConfig,
    rng: RngSpec,
) -> tuple[float, float]:
    if spec.style is not ExerciseStyle.BERMUDAN:
        raise SwaptionSpec.Invalid("Longstaff-Schwartz needs a Bermudan swaption")
    ks = spec.exercise_indices(grid)
    x_ex, payoffs, discounts = [], [], []
    for block in iter_path_blocks(params, grid, cfg.n_paths, rng):
        x_ex.append(block.x[:, ks])
        payoffs.append(bermudan_payoffs(params, spec, block))
        discounts.append(_discounts_to(params, block, ks))
    x_ex = np.concatenate(x_ex)  # [P x (n+1) x d]
    payoffs = np.concatenate(payoffs)  # [P x (n+1)]
    discounts = np.concatenate(discounts)  # [P x (n+1)]

    n = spec.n
    cash_flow = discounts[:, n] * payoffs[:, n]
    for m in range(n - 1, -1, -1):
        value = payoffs[:, m]
        mask = value > 0.0 if cfg.itm_only else np.ones(value.size, dtype=bool)
        if not mask.any():
            Logs.dev(f"T_{m}: no path in the money")
            continue
        basis = regression_basis(x_ex[mask, m], cfg.degree)
        future = cash_flow[mask] / discounts[mask, m]
        continuation = basis @ least_squares(basis, future)
        exercise = (value[mask] > 0.0) & (value[mask] >= continuation)
        rows = np.flatnonzero(mask)[exercise]
        cash_flow[rows] = discounts[rows, m] * value[rows]
        Logs.dev(
            f"T_{m}: exercised on {rows.size}/{value.size} paths "
            f"({rows.size / value.size:.1%})"
        )

    price = float(cash_flow.mean())
    stderr = float(cash_flow.std(ddof=1) / math.sqrt(cash_flow.size))
    return price, stderr


def _discounts_to(
    params: CheyetteParams, paths: PathBatch, ks: list[int]
) -> np.ndarray:
    """exp(-sum_{k < k_m} r dt) for every exercise index k_m: [M x (n+1)]."""
    rates = short_rates(params, paths, 0, max(ks) - 1)  # [K x M]
    integral = np.vstack(
        [np.zeros((1, paths.m_paths)), np.cumsum(rates, axis=0) * paths.grid.dt]
    )
    return np.exp(-integral[ks].T)


################################################################################


class LongstaffSchwartzPricer(IPricer):
    def init(self, config) -> None:
        self.params = config.model_params()
        self.spec = config.swaption()
        self.grid = config.time_grid()
        self.cfg = config.ls_config()
        if self.spec.style is not ExerciseStyle.BERMUDAN:
            raise IPricer.Unsupported("method 'ls' prices Bermudan swaptions only")
        if self.cfg.n_paths < 10 * self.cfg.basis_size(self.params.d):
            Logs.warning(
                f"{self.cfg.n_paths} paths for {self.cfg.basis_size(self.params.d)} "
                "regressors: continuation estimates will be noisy"
            )

    def run(self, run_id: int, rng: RngSpec) -> RunResult:
        price, stderr = ls_price_bermudan(
            self.params, self.spec, self.grid, self.cfg, rng
        )
        Logs.user(
            f"run {run_id}: LS degree {self.cfg.degree} price {price:.6f} "
            f"+- {stderr:.6f} ({self.cfg.n_paths} paths)"
        )
        return RunResult(
            run_id,
            rng.seed,
            price,
            stderr,
            n_paths=self.cfg.n_paths,
            degree=self.cfg.degree,
        )
