"""Euler-Maruyama simulation of the Cheyette factors on a uniform grid.

    X^{k+1} = X^k + (Y^k - kappa X^k) dt + eta dW^k
    Y^{k+1} = Y^k + (eta^2 - 2 kappa Y^k) dt

Random numbers come from counter-based Philox streams, one per block of
``RngSpec.block_size`` consecutive paths, keyed by (seed, block index). A path
therefore sees the same increments whatever the batch size or the order in
which blocks are produced.
"""

from dataclasses import dataclass
from typing import Iterator

import numpy as np
import pandas as pd

from SwaptionPricer.Model.Cheyette import CheyetteParams
from SwaptionPricer.Simulation.TimeGrid import TimeGrid

################################################################################


_SEED_LIMIT = 2**64


@dataclass(frozen=True)
class RngSpec:
    seed: int
    block_size: int = 2048

    def __post_init__(self):
        if not 0 <= int(self.seed) < _SEED_LIMIT:
            raise ValueError(f"seed must fit in 64 unsigned bits: {self.seed}")
        if self.block_size < 1:
            raise ValueError(f"block_size must be >= 1: {self.block_size}")
        object.__setattr__(self, "seed", int(self.seed))

    def generator(self, block: int = 0) -> np.random.Generator:
        seq = np.random.SeedSequence(self.seed, spawn_key=(block,))
        return np.random.Generator(np.random.Philox(seq))

    def derive(self, *key: int) -> "RngSpec":
        """Child spec for (seed, key); used for runs, epochs and inits."""
        seq = np.random.SeedSequence(self.seed, spawn_key=tuple(key))
        child = int(seq.generate_state(1, dtype=np.uint64)[0])
        return RngSpec(child, self.block_size)


@dataclass(frozen=True, eq=False)
class PathBatch:
    grid: TimeGrid
    x: np.ndarray  # [M x (N+1) x d]
    y: np.ndarray  # [M x (N+1) x d]
    dw: np.ndarray  # [M x N x d]

    @property
    def m_paths(self) -> int:
        return int(self.x.shape[0])

    @property
    def d(self) -> int:
        return int(self.x.shape[2])

    def network_inputs(self, k_lo: int, k_hi: int) -> np.ndarray:
        """(X, Y, t) triples for k_lo..k_hi, laid out k-major: [K x M x 2d+1]."""
        ks = np.arange(k_lo, k_hi + 1)
        x = np.swapaxes(self.x[:, ks, :], 0, 1)
        y = np.swapaxes(self.y[:, ks, :], 0, 1)
        t = np.broadcast_to(
            (ks * self.grid.dt)[:, None, None], (ks.size, self.m_paths, 1)
        )
        return np.concatenate([x, y, t], axis=2)


################################################################################


def gaussian_increments(rng: RngSpec, shape, block: int = 0) -> np.ndarray:
    return rng.generator(block).standard_normal(shape)


def euler_paths(
    params: CheyetteParams, grid: TimeGrid, dw: np.ndarray
) -> PathBatch:
    m_paths, n_steps, d = dw.shape
    if n_steps != grid.n_steps or d != params.d:
        raise ValueError(
            f"increments {dw.shape} do not match grid N={grid.n_steps}, "
            f"d={params.d}"
        )
    dt = grid.dt
    kappa, eta = params.kappa, params.eta

    # Y does not depend on the path for constant eta
    y_path = np.zeros((n_steps + 1, d))
    for k in range(n_steps):
        y_path[k + 1] = y_path[k] + (eta**2 - 2.0 * kappa * y_path[k]) * dt
    y = np.broadcast_to(y_path, (m_paths, n_steps + 1, d)).copy()

    x = np.zeros((m_paths, n_steps + 1, d))
    shocks = eta * dw
    for k in range(n_steps):
        drift = (y_path[k] - kappa * x[:, k]) * dt
        x[:, k + 1] = x[:, k] + drift + shocks[:, k]
    return PathBatch(grid, x, y, dw)


def simulate_paths(
    params: CheyetteParams, grid: TimeGrid, m_paths: int, rng: RngSpec
) -> PathBatch:
    if m_paths < 1:
        raise ValueError(f"m_paths must be >= 1, got {m_paths}")
    dw = np.concatenate(
        [
            _block_increments(params, grid, rng, block, size)
            for block, size in _blocks(m_paths, rng.block_size)
        ],
        axis=0,
    )
    return euler_paths(params, grid, dw)


def iter_path_blocks(
    params: CheyetteParams, grid: TimeGrid, n_paths: int, rng: RngSpec
) -> Iterator[PathBatch]:
    """Same paths as simulate_paths, one block at a time."""
    if n_paths < 1:
        raise ValueError(f"n_paths must be >= 1, got {n_paths}")
    for block, size in _blocks(n_paths, rng.block_size):
        dw = _block_increments(params, grid, rng, block, size)
        yield euler_paths(params, grid, dw)


def dump_paths(batch: PathBatch, path: str, binary: bool = False) -> None:
    if binary:
        np.savez(
            path,
            t=batch.grid.points.astype("<f8"),
            x=batch.x.astype("<f8"),
            y=batch.y.astype("<f8"),
            dw=batch.dw.astype("<f8"),
        )
        return
    m_paths, n_points, d = batch.x.shape
    columns = {
        "path_id": np.repeat(np.arange(m_paths), n_points),
        "k": np.tile(np.arange(n_points), m_paths),
        "t": np.tile(batch.grid.points, m_paths),
    }
    for i in range(d):
        columns[f"x_{i + 1}"] = batch.x[:, :, i].reshape(-1)
    for i in range(d):
        columns[f"y_{i + 1}"] = batch.y[:, :, i].reshape(-1)
    pd.DataFrame(columns).to_csv(path, index=False)


################################################################################


def _blocks(n_paths: int, block_size: int) -> list[tuple[int, int]]:
    count = -(-n_paths // block_size)
    return [
        (b, min(block_size, n_paths - b * block_size)) for b in range(count)
    ]


def _block_increments(
    params: CheyetteParams, grid: TimeGrid, rng: RngSpec, block: int, size: int
) -> np.ndarray:
    z = gaussian_increments(rng, (size, grid.n_steps, params.d), block)
    return np.sqrt(grid.dt) * z
