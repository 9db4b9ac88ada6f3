import numpy as np
import pytest

from SwaptionPricer.Curve.DiscountCurve import DiscountCurve
from SwaptionPricer.Model.Cheyette import CheyetteParams
from SwaptionPricer.Model.Swaption import SwaptionSpec
from SwaptionPricer.Pricers.IPricer import IPricer
from SwaptionPricer.Pricers.LongstaffSchwartz import least_squares
from SwaptionPricer.Pricers.LongstaffSchwartz import ls_price_bermudan
from SwaptionPricer.Pricers.LongstaffSchwartz import LsConfig
from SwaptionPricer.Pricers.LongstaffSchwartz import regression_basis
from SwaptionPricer.Pricers.MonteCarlo import analytic_k0_price
from SwaptionPricer.Pricers.MonteCarlo import mc_price_european
from SwaptionPricer.Simulation.Paths import RngSpec
from SwaptionPricer.Simulation.TimeGrid import TimeGrid

TENOR = (1.0, 2.0, 3.0, 4.0, 5.0)
ANALYTIC = 0.99005 - 0.88232
GRID = TimeGrid(5.0, 500)


def _params(d=3, eta=0.0065):
    return CheyetteParams.uniform(d, -0.02, eta, DiscountCurve.default())


def test_analytic_price():
    curve = DiscountCurve.default()
    assert analytic_k0_price(curve, SwaptionSpec(TENOR, 0.0)) == pytest.approx(0.10773, abs=1e-12)
    with pytest.raises(IPricer.Unsupported):
        analytic_k0_price(curve, SwaptionSpec(TENOR, 0.01))


def test_mc_without_volatility_is_exact():
    price, stderr = mc_price_european(
        _params(eta=0.0), SwaptionSpec(TENOR, 0.0), GRID, 50, RngSpec(1)
    )
    assert price == pytest.approx(ANALYTIC, abs=1e-10)
    assert stderr < 1e-12


def test_mc_out_of_the_money():
    price, _ = mc_price_european(
        _params(), SwaptionSpec(TENOR, 1.0), GRID, 500, RngSpec(2)
    )
    assert price == 0.0


def test_mc_matches_closed_form():
    price, stderr = mc_price_european(
        _params(), SwaptionSpec(TENOR, 0.0), GRID, 20_000, RngSpec(3, block_size=4096)
    )
    assert stderr > 0.0
    assert abs(price - ANALYTIC) < 3 * stderr + 2e-4


def test_mc_is_reproducible():
    args = (_params(), SwaptionSpec(TENOR, 0.01), GRID, 300, RngSpec(4, block_size=128))
    assert mc_price_european(*args) == mc_price_european(*args)


def test_mc_needs_european():
    with pytest.raises(SwaptionSpec.Invalid):
        mc_price_european(_params(), SwaptionSpec(TENOR, 0.0, "bermudan"), GRID, 10, RngSpec(0))


def test_regression_basis():
    x = np.array([[1.0, 2.0, 3.0], [0.5, -1.0, 2.0]])
    linear = regression_basis(x, 1)
    np.testing.assert_array_equal(linear, [[1, 1, 2, 3], [1, 0.5, -1, 2]])
    quadratic = regression_basis(x, 2)
    assert quadratic.shape == (2, LsConfig(degree=2).basis_size(3))
    np.testing.assert_array_equal(quadratic[0, 4:], [1, 2, 3, 4, 6, 9])


def test_least_squares_full_rank():
    rng = np.random.default_rng(0)
    a, b = rng.normal(size=(50, 4)), rng.normal(size=50)
    expected, *_ = np.linalg.lstsq(a, b, rcond=None)
    np.testing.assert_allclose(least_squares(a, b), expected, rtol=1e-10)


def test_least_squares_rank_deficient(capsys):
    rng = np.random.default_rng(1)
    col = rng.normal(size=20)
    a = np.stack([np.ones(20), col, col], axis=1)
    b = rng.normal(size=20)
    coef = least_squares(a, b)
    np.testing.assert_allclose(a.T @ (a @ coef - b), 0.0, atol=1e-10)
    assert "rank-deficient" in capsys.readouterr().out


def test_ls_config():
    assert LsConfig(degree=1).basis_size(3) == 4
    with pytest.raises(ValueError):
        LsConfig(degree=3)


def test_ls_without_volatility_exercises_immediately(capsys):
    spec = SwaptionSpec(TENOR, 0.0, "bermudan")
    price, stderr = ls_price_bermudan(
        _params(d=1, eta=0.0), spec, GRID, LsConfig(n_paths=200), RngSpec(5)
    )
    assert price == pytest.approx(ANALYTIC, abs=1e-10)
    assert stderr < 1e-12
    assert "pseudo-inverse" in capsys.readouterr().out


def test_ls_needs_bermudan():
    with pytest.raises(SwaptionSpec.Invalid):
        ls_price_bermudan(_params(), SwaptionSpec(TENOR, 0.0), GRID, LsConfig(), RngSpec(0))


@pytest.mark.slow
def test_ls_bermudan_premium():
    spec = SwaptionSpec(TENOR, 0.0, "bermudan")
    params, rng = _params(), RngSpec(2024)
    linear, se_linear = ls_price_bermudan(params, spec, GRID, LsConfig(1, n_paths=30_000), rng)
    quadratic, _ = ls_price_bermudan(params, spec, GRID, LsConfig(2, n_paths=30_000), rng)
    assert ANALYTIC - 3 * se_linear <= linear <= 0.112
    assert quadratic >= linear - 2 * se_linear


def test_prices_do_not_increase_with_strike():
    params, rng = _params(), RngSpec(11, block_size=512)
    european = [
        mc_price_european(params, SwaptionSpec(TENOR, k), GRID, 2000, rng)[0]
        for k in (0.0, 0.01)
    ]
    bermudan = [
        ls_price_bermudan(params, SwaptionSpec(TENOR, k, "bermudan"), GRID, LsConfig(2, n_paths=2000), rng)[0]
        for k in (0.0, 0.01)
    ]
    # same paths for both strikes: the European payoff falls path by path
    assert european[1] < european[0]
    assert bermudan[1] < bermudan[0]


@pytest.mark.slow
@pytest.mark.parametrize("degree", [1, 2])
def test_bermudan_is_worth_at_least_european(degree):
    params = _params()
    ls_k0, se_k0 = ls_price_bermudan(
        params, SwaptionSpec(TENOR, 0.0, "bermudan"), GRID, LsConfig(degree, n_paths=20_000), RngSpec(31)
    )
    assert ls_k0 >= ANALYTIC - 3 * se_k0

    european, se_eur = mc_price_european(params, SwaptionSpec(TENOR, 0.01), GRID, 20_000, RngSpec(32))
    bermudan, se_ber = ls_price_bermudan(
        params, SwaptionSpec(TENOR, 0.01, "bermudan"), GRID, LsConfig(degree, n_paths=20_000), RngSpec(33)
    )
    assert bermudan >= european - 3 * np.hypot(se_eur, se_ber)
