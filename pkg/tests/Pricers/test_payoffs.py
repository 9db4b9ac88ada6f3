import math

import numpy as np
import pytest

from SwaptionPricer.Curve.DiscountCurve import DiscountCurve
from SwaptionPricer.Model.Cheyette import CheyetteParams
from SwaptionPricer.Model.Swaption import ExerciseStyle
from SwaptionPricer.Model.Swaption import SwaptionSpec
from SwaptionPricer.Pricers.Payoffs import bermudan_payoffs
from SwaptionPricer.Pricers.Payoffs import european_terminal
from SwaptionPricer.Pricers.Payoffs import exercise_value
from SwaptionPricer.Pricers.Payoffs import pathwise_discount
from SwaptionPricer.Pricers.Payoffs import short_rates
from SwaptionPricer.Simulation.Paths import PathBatch
from SwaptionPricer.Simulation.TimeGrid import TimeGrid

TENOR = (1.0, 2.0, 3.0, 4.0, 5.0)


@pytest.fixture(scope="module")
def params():
    return CheyetteParams.uniform(3, -0.02, 0.0065, DiscountCurve.default())


@pytest.fixture(scope="module")
def flat_paths():
    grid = TimeGrid(5.0, 500)
    return PathBatch(
        grid, np.zeros((2, 501, 3)), np.zeros((2, 501, 3)), np.zeros((2, 500, 3))
    )


def test_european_payoff_at_zero_state(params, flat_paths):
    payoff = european_terminal(params, SwaptionSpec(TENOR, 0.0), flat_paths)
    np.testing.assert_allclose(payoff, 1.0 - 0.88232 / 0.99005, rtol=1e-13)
    np.testing.assert_allclose(payoff, 0.108813, atol=1e-6)


def test_bermudan_payoffs_at_zero_state(params, flat_paths):
    spec = SwaptionSpec(TENOR, 0.0, ExerciseStyle.BERMUDAN)
    payoffs = bermudan_payoffs(params, spec, flat_paths)
    assert payoffs.shape == (2, 5)
    np.testing.assert_allclose(payoffs[:, 1], 1.0 - 0.88232 / 0.97528, rtol=1e-13)
    np.testing.assert_allclose(payoffs[:, 1], 0.095317, atol=2e-6)
    np.testing.assert_array_equal(payoffs[:, 4], 0.0)
    european = european_terminal(params, spec.with_style(ExerciseStyle.EUROPEAN), flat_paths)
    np.testing.assert_allclose(payoffs[:, 0], european, rtol=1e-15)


def test_fixed_leg_reduces_payoff(params):
    spec = SwaptionSpec(TENOR, 0.01)
    value = exercise_value(params, spec, 1, np.zeros((1, 3)), np.zeros((1, 3)))
    p = {t: p for t, p in DiscountCurve.default().pillars}
    bonds = [p[t] / p[2.0] for t in (3.0, 4.0, 5.0)]
    expected = 1.0 - bonds[-1] - 0.01 * sum(bonds)
    assert value[0] == pytest.approx(expected, rel=1e-13)


def test_deep_out_of_the_money_pays_nothing(params, flat_paths):
    payoff = european_terminal(params, SwaptionSpec(TENOR, 1.0), flat_paths)
    np.testing.assert_array_equal(payoff, 0.0)


def test_payoffs_check_style(params, flat_paths):
    with pytest.raises(SwaptionSpec.Invalid):
        european_terminal(params, SwaptionSpec(TENOR, 0.0, "bermudan"), flat_paths)
    with pytest.raises(SwaptionSpec.Invalid):
        bermudan_payoffs(params, SwaptionSpec(TENOR, 0.0), flat_paths)


def test_pathwise_discount_reproduces_curve(params, flat_paths):
    np.testing.assert_array_equal(pathwise_discount(params, flat_paths, 0), 1.0)
    np.testing.assert_allclose(pathwise_discount(params, flat_paths, 100), 0.99005, rtol=1e-12)
    np.testing.assert_allclose(
        pathwise_discount(params, flat_paths, 150),
        DiscountCurve.default().discount(1.5),
        rtol=1e-12,
    )


def test_pathwise_discount_includes_factors(params):
    grid = TimeGrid(1.0, 10)
    x = np.full((1, 11, 3), 0.001)
    paths = PathBatch(grid, x, np.zeros_like(x), np.zeros((1, 10, 3)))
    expected = 0.99005 * math.exp(-0.003)
    assert pathwise_discount(params, paths, 10)[0] == pytest.approx(expected, rel=1e-12)


def test_short_rates_layout(params, flat_paths):
    rates = short_rates(params, flat_paths, 98, 101)
    assert rates.shape == (4, 2)
    np.testing.assert_allclose(rates[:2], -math.log(0.99005), rtol=1e-12)
    np.testing.assert_allclose(rates[2:], math.log(0.99005 / 0.97528), rtol=1e-12)
