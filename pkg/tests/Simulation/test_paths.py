import math

import numpy as np
import pandas as pd
import pytest
from scipy.integrate import solve_ivp

from SwaptionPricer.Curve.DiscountCurve import DiscountCurve
from SwaptionPricer.Model.Cheyette import CheyetteParams
from SwaptionPricer.Model.Cheyette import y_closed_form
from SwaptionPricer.Simulation.Paths import dump_paths
from SwaptionPricer.Simulation.Paths import euler_paths
from SwaptionPricer.Simulation.Paths import gaussian_increments
from SwaptionPricer.Simulation.Paths import iter_path_blocks
from SwaptionPricer.Simulation.Paths import RngSpec
from SwaptionPricer.Simulation.Paths import simulate_paths
from SwaptionPricer.Simulation.TimeGrid import TimeGrid

KAPPA = -0.02
ETA = 0.0065


def _params(d=3, eta=ETA):
    return CheyetteParams.uniform(d, KAPPA, eta, DiscountCurve.default())


def test_one_step_without_noise():
    params = _params()
    grid = TimeGrid(0.01, 1)
    paths = euler_paths(params, grid, np.zeros((1, 1, 3)))
    np.testing.assert_array_equal(paths.x[0, 1], 0.0)
    np.testing.assert_allclose(paths.y[0, 1], 4.225e-7, rtol=1e-12)


def test_zero_volatility_keeps_factors_at_zero():
    params = _params(eta=0.0)
    paths = simulate_paths(params, TimeGrid(5.0, 500), 16, RngSpec(7))
    np.testing.assert_array_equal(paths.x, 0.0)
    np.testing.assert_array_equal(paths.y, 0.0)


def test_y_matches_closed_form():
    params = _params(d=1)
    paths = euler_paths(params, TimeGrid(1.0, 100), np.zeros((1, 100, 1)))
    assert abs(paths.y[0, -1, 0] - y_closed_form(params, 1.0)[0]) < 5e-8


def test_y_converges_with_first_order():
    params = _params(d=1)
    exact = y_closed_form(params, 1.0)[0]
    errors = []
    for n_steps in (25, 50, 100):
        paths = euler_paths(params, TimeGrid(1.0, n_steps), np.zeros((1, n_steps, 1)))
        errors.append(abs(paths.y[0, -1, 0] - exact))
    assert 1.8 < errors[0] / errors[1] < 2.2
    assert 1.8 < errors[1] / errors[2] < 2.2


def test_y_is_shared_by_all_paths():
    paths = simulate_paths(_params(), TimeGrid(1.0, 20), 5, RngSpec(1))
    np.testing.assert_array_equal(paths.y, np.broadcast_to(paths.y[0], paths.y.shape))


def test_simulation_is_deterministic():
    params, grid = _params(), TimeGrid(1.0, 20)
    a = simulate_paths(params, grid, 10, RngSpec(42))
    b = simulate_paths(params, grid, 10, RngSpec(42))
    np.testing.assert_array_equal(a.x, b.x)
    np.testing.assert_array_equal(a.dw, b.dw)
    c = simulate_paths(params, grid, 10, RngSpec(43))
    assert not np.array_equal(a.x, c.x)


def test_path_does_not_depend_on_batch_size():
    params, grid = _params(), TimeGrid(1.0, 20)
    small = simulate_paths(params, grid, 10, RngSpec(42, block_size=8))
    large = simulate_paths(params, grid, 30, RngSpec(42, block_size=8))
    np.testing.assert_array_equal(small.x, large.x[:10])


def test_blocks_match_single_batch():
    params, grid, rng = _params(), TimeGrid(1.0, 20), RngSpec(5, block_size=4)
    whole = simulate_paths(params, grid, 10, rng)
    blocks = list(iter_path_blocks(params, grid, 10, rng))
    assert [b.m_paths for b in blocks] == [4, 4, 2]
    np.testing.assert_array_equal(np.concatenate([b.x for b in blocks]), whole.x)


def test_blocks_use_independent_streams():
    rng = RngSpec(11)
    a = gaussian_increments(rng, (1000,), block=0)
    b = gaussian_increments(rng, (1000,), block=1)
    assert abs(np.corrcoef(a, b)[0, 1]) < 0.15


def test_gaussian_moments():
    z = gaussian_increments(RngSpec(2024), (1_000_000,))
    assert abs(z.mean()) < 0.004
    assert 0.994 < z.var() < 1.006


def test_derived_streams_differ():
    rng = RngSpec(3)
    assert rng.derive(0).seed != rng.derive(1).seed
    assert rng.derive(0, 1).seed == rng.derive(0, 1).seed
    assert rng.derive(0).block_size == rng.block_size


def test_invalid_rng():
    with pytest.raises(ValueError):
        RngSpec(-1)
    with pytest.raises(ValueError):
        RngSpec(1, block_size=0)


def test_mismatched_increments():
    with pytest.raises(ValueError):
        euler_paths(_params(), TimeGrid(1.0, 10), np.zeros((2, 9, 3)))


def test_network_inputs_layout():
    paths = simulate_paths(_params(d=2), TimeGrid(1.0, 10), 4, RngSpec(0))
    inputs = paths.network_inputs(3, 6)
    assert inputs.shape == (4, 4, 5)
    np.testing.assert_array_equal(inputs[1, 2, :2], paths.x[2, 4])
    np.testing.assert_array_equal(inputs[1, 2, 2:4], paths.y[2, 4])
    assert inputs[1, 2, 4] == pytest.approx(0.4)


def test_dump_csv(tmp_path):
    paths = simulate_paths(_params(d=2), TimeGrid(1.0, 10), 3, RngSpec(0))
    out = tmp_path / "paths.csv"
    dump_paths(paths, str(out))
    frame = pd.read_csv(out)
    assert list(frame.columns) == ["path_id", "k", "t", "x_1", "x_2", "y_1", "y_2"]
    assert len(frame) == 3 * 11
    row = frame[(frame.path_id == 1) & (frame.k == 7)].iloc[0]
    assert row.x_2 == pytest.approx(paths.x[1, 7, 1], rel=1e-12)


def test_dump_binary(tmp_path):
    paths = simulate_paths(_params(d=2), TimeGrid(1.0, 10), 3, RngSpec(0))
    out = tmp_path / "paths.npz"
    dump_paths(paths, str(out), binary=True)
    with np.load(out) as archive:
        assert sorted(archive.files) == ["dw", "t", "x", "y"]
        np.testing.assert_array_equal(archive["x"], paths.x)


@pytest.mark.slow
def test_x_moments_match_ode():
    params = _params(d=1)
    m_paths = 100_000
    paths = simulate_paths(params, TimeGrid(1.0, 100), m_paths, RngSpec(99))
    x1 = paths.x[:, -1, 0]

    # E[X]' = Y - kappa E[X]
    def mean_rhs(t, m):
        return y_closed_form(params, t) - KAPPA * m

    ode = solve_ivp(mean_rhs, (0.0, 1.0), [0.0], rtol=1e-10, atol=1e-14)
    expected_mean = ode.y[0, -1]
    expected_var = ETA**2 * (-math.expm1(-2 * KAPPA * 1.0)) / (2 * KAPPA)

    stderr = x1.std() / math.sqrt(m_paths)
    assert abs(x1.mean() - expected_mean) < 4 * stderr
    var_stderr = expected_var * math.sqrt(2.0 / (m_paths - 1))
    assert abs(x1.var(ddof=1) - expected_var) < 4 * var_stderr
