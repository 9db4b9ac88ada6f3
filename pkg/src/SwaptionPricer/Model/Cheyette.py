"""Multi-factor Cheyette model with constant mean reversion and volatility.

The state of the model is the pair of factor vectors (X, Y). Every zero-coupon
bond price is reconstructed from it in closed form:

    P(t, T) = P(0, T) / P(0, t) * exp(-X . G(t, T) - 1/2 Y . G(t, T)^2)

with G_i(t, T) = (1 - exp(-kappa_i (T - t))) / kappa_i. Factor Brownian drivers
are uncorrelated.
"""

from dataclasses import dataclass

import numpy as np

from SwaptionPricer.Curve.DiscountCurve import DiscountCurve

################################################################################


@dataclass(frozen=True, eq=False)
class CheyetteParams:
    kappa: np.ndarray
    eta: np.ndarray
    curve: DiscountCurve

    # Exceptions
    class Invalid(ValueError):
        pass

    class TimeOrder(ValueError):
        pass

    def __post_init__(self):
        kappa = np.atleast_1d(np.asarray(self.kappa, dtype=np.float64))
        eta = np.atleast_1d(np.asarray(self.eta, dtype=np.float64))
        if kappa.ndim != 1 or kappa.size < 1:
            raise CheyetteParams.Invalid("kappa must be a non-empty vector")
        if eta.shape != kappa.shape:
            raise CheyetteParams.Invalid(
                f"eta has {eta.size} entries, kappa has {kappa.size}"
            )
        if np.any(kappa == 0.0):
            raise CheyetteParams.Invalid("kappa_i = 0 is not supported")
        if np.any(eta < 0.0):
            raise CheyetteParams.Invalid("eta_i must be non-negative")
        kappa.setflags(write=False)
        eta.setflags(write=False)
        object.__setattr__(self, "kappa", kappa)
        object.__setattr__(self, "eta", eta)

    @classmethod
    def uniform(
        cls, d: int, kappa: float, eta: float, curve: DiscountCurve
    ) -> "CheyetteParams":
        if d < 1:
            raise CheyetteParams.Invalid(f"factor count must be >= 1, got {d}")
        return cls(np.full(d, kappa), np.full(d, eta), curve)

    @property
    def d(self) -> int:
        return int(self.kappa.size)


@dataclass(frozen=True, eq=False)
class FactorState:
    """Factor values at time t; x and y are [d] or a batch [M x d]."""

    t: float
    x: np.ndarray
    y: np.ndarray

    @classmethod
    def origin(cls, d: int, t: float = 0.0) -> "FactorState":
        return cls(t, np.zeros(d), np.zeros(d))


################################################################################


def g_function(params: CheyetteParams, t: float, T: float) -> np.ndarray:
    if t > T:
        raise CheyetteParams.TimeOrder(f"G(t, T) needs t <= T, got {t} > {T}")
    tau = T - t
    return -np.expm1(-params.kappa * tau) / params.kappa


def zcb_price(params: CheyetteParams, state: FactorState, T: float):
    if state.t > T:
        raise CheyetteParams.TimeOrder(
            f"bond maturity {T} precedes state time {state.t}"
        )
    curve = params.curve
    ratio = curve.discount(T) / curve.discount(state.t)
    g = g_function(params, state.t, T)
    x = np.asarray(state.x, dtype=np.float64)
    y = np.asarray(state.y, dtype=np.float64)
    exponent = -(x @ g) - 0.5 * (y @ (g * g))
    price = ratio * np.exp(exponent)
    return float(price) if np.ndim(price) == 0 else price


def short_rate(params: CheyetteParams, state: FactorState):
    x = np.asarray(state.x, dtype=np.float64)
    rate = params.curve.forward_rate(state.t) + x.sum(axis=-1)
    return float(rate) if np.ndim(rate) == 0 else rate


def y_closed_form(params: CheyetteParams, t: float) -> np.ndarray:
    if t < 0.0:
        raise CheyetteParams.TimeOrder(f"Y(t) needs t >= 0, got {t}")
    two_kappa = 2.0 * params.kappa
    return params.eta**2 * (-np.expm1(-two_kappa * t)) / two_kappa
