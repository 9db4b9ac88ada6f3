import math

import numpy as np
import pandas as pd
import pytest
from scipy.integrate import quad

from SwaptionPricer.Curve.DiscountCurve import DiscountCurve

TABLE_1 = [
    (0.0, 1.00000),
    (1.0, 0.99005),
    (2.0, 0.97528),
    (3.0, 0.95596),
    (4.0, 0.91376),
    (5.0, 0.88232),
    (6.0, 0.83500),
    (7.0, 0.78240),
    (8.0, 0.77064),
    (13.0, 0.67661),
    (18.0, 0.60911),
    (23.0, 0.53693),
    (28.0, 0.49611),
    (33.0, 0.47940),
    (38.0, 0.46721),
]


@pytest.fixture(scope="module")
def curve():
    return DiscountCurve.default()


def test_bundled_curve_is_table_1(curve):
    assert curve.pillars == TABLE_1
    assert curve.last_maturity == 38.0
    assert curve.is_non_increasing()


def test_discount_at_pillars(curve):
    assert curve.discount(0.0) == 1.0
    assert curve.discount(5.0) == pytest.approx(0.88232, abs=1e-15)
    for t, p in TABLE_1:
        assert curve.discount(t) == pytest.approx(p, rel=1e-14)


def test_discount_is_log_linear_between_pillars(curve):
    expected = math.exp(0.5 * (math.log(0.99005) + math.log(0.97528)))
    assert curve.discount(1.5) == pytest.approx(expected, rel=1e-14)
    assert curve.discount(1.5) == pytest.approx(0.982638, abs=2e-6)


def test_forward_rate_is_piecewise_constant(curve):
    assert curve.forward_rate(1.3) == pytest.approx(
        math.log(0.99005 / 0.97528), rel=1e-13
    )
    assert curve.forward_rate(1.3) == pytest.approx(0.01503, abs=5e-6)
    assert curve.forward_rate(0.5) == pytest.approx(-math.log(0.99005), rel=1e-13)
    assert curve.forward_rate(0.5) == pytest.approx(0.0100003, abs=1e-6)
    # right-continuous at the pillar
    assert curve.forward_rate(1.0) == curve.forward_rate(1.3)
    assert curve.forward_rate(0.999) == curve.forward_rate(0.0)


def test_flat_curve_forward():
    flat = DiscountCurve.flat(0.02, 10.0)
    t = np.linspace(0.0, 9.99, 50)
    np.testing.assert_allclose(flat.forward_rate(t), 0.02, rtol=1e-12)
    assert flat.discount(3.0) == pytest.approx(math.exp(-0.06), rel=1e-12)


def test_vectorised_evaluation(curve):
    t = np.array([0.0, 0.5, 1.5, 5.0])
    values = curve.discount(t)
    assert isinstance(values, np.ndarray)
    assert values.shape == (4,)
    assert isinstance(curve.discount(0.5), float)


def test_integrated_forward_round_trip(curve):
    t = np.linspace(0.0, 38.0, 1001)
    np.testing.assert_allclose(
        np.exp(-curve.integrated_forward(t)), curve.discount(t), atol=1e-12
    )


def test_integrated_forward_matches_quadrature(curve):
    pillars = [p for p, _ in TABLE_1]
    for t in (0.7, 2.5, 9.0, 30.0):
        integral, _ = quad(
            curve.forward_rate,
            0.0,
            t,
            points=[p for p in pillars if 0.0 < p < t],
            limit=200,
        )
        assert curve.integrated_forward(t) == pytest.approx(integral, abs=1e-10)


def test_out_of_range(curve):
    with pytest.raises(DiscountCurve.OutOfRange):
        curve.discount(-0.1)
    with pytest.raises(DiscountCurve.OutOfRange):
        curve.discount(38.5)
    with pytest.raises(DiscountCurve.OutOfRange):
        curve.forward_rate(38.0)
    with pytest.raises(DiscountCurve.OutOfRange):
        curve.discount(np.array([1.0, 40.0]))


@pytest.mark.parametrize(
    "maturities, prices",
    [
        ([0.5, 1.0], [1.0, 0.99]),
        ([0.0, 1.0], [0.99, 0.98]),
        ([0.0, 2.0, 1.0], [1.0, 0.98, 0.99]),
        ([0.0, 1.0], [1.0, -0.5]),
        ([0.0], [1.0]),
    ],
)
def test_invalid_pillars(maturities, prices):
    with pytest.raises(DiscountCurve.Invalid):
        DiscountCurve(maturities, prices)


def test_from_csv(tmp_path):
    path = tmp_path / "curve.csv"
    pd.DataFrame({"maturity": [0.0, 1.0, 2.0], "price": [1.0, 0.99, 0.97]}).to_csv(
        path, index=False
    )
    curve = DiscountCurve.from_csv(str(path))
    assert curve.discount(2.0) == pytest.approx(0.97)

    bad = tmp_path / "bad.csv"
    pd.DataFrame({"t": [0.0, 1.0], "p": [1.0, 0.99]}).to_csv(bad, index=False)
    with pytest.raises(DiscountCurve.Invalid):
        DiscountCurve.from_csv(str(bad))
