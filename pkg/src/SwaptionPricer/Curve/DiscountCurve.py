"""Initial discount curve P(0, T) and its implied forward curve f(0, t).

Prices are interpolated log-linearly between pillars, i.e. forward rates are
piecewise constant and right-continuous. Nothing is extrapolated past the last
pillar.
"""

import math
import os

import numpy as np
import pandas as pd

from SwaptionPricer.Util.PathInfo import default_curve_path

################################################################################


class DiscountCurve:
    # Exceptions
    class OutOfRange(ValueError):
        pass

    class Invalid(ValueError):
        pass

    # API
    def __init__(self, maturities, prices):
        t = np.asarray(maturities, dtype=np.float64)
        p = np.asarray(prices, dtype=np.float64)
        if t.ndim != 1 or t.shape != p.shape or t.size < 2:
            raise DiscountCurve.Invalid(
                "curve needs at least two (maturity, price) pillars, "
                f"got maturities {t.shape} and prices {p.shape}"
            )
        if t[0] != 0.0 or p[0] != 1.0:
            raise DiscountCurve.Invalid(
                f"first pillar must be (0, 1.0), got ({t[0]}, {p[0]})"
            )
        if np.any(np.diff(t) <= 0.0):
            raise DiscountCurve.Invalid("maturities must strictly increase")
        if np.any(p <= 0.0) or not np.all(np.isfinite(p)):
            raise DiscountCurve.Invalid("prices must be finite and positive")

        self._t = t
        self._p = p
        self._log_p = np.log(p)
        # forward on [t_i, t_{i+1})
        self._fwd = -np.diff(self._log_p) / np.diff(t)

    @classmethod
    def from_csv(cls, path: str) -> "DiscountCurve":
        if not os.path.isfile(path):
            raise DiscountCurve.Invalid(f"curve file '{path}' does not exist")
        frame = pd.read_csv(path)
        missing = {"maturity", "price"} - set(frame.columns)
        if missing:
            raise DiscountCurve.Invalid(
                f"curve file '{path}' lacks columns {sorted(missing)}"
            )
        return cls(frame["maturity"].to_numpy(), frame["price"].to_numpy())

    @classmethod
    def default(cls) -> "DiscountCurve":
        return cls.from_csv(default_curve_path())

    @classmethod
    def flat(cls, rate: float, t_max: float) -> "DiscountCurve":
        return cls([0.0, t_max], [1.0, math.exp(-rate * t_max)])

    @property
    def pillars(self) -> list[tuple[float, float]]:
        return list(zip(self._t.tolist(), self._p.tolist()))

    @property
    def last_maturity(self) -> float:
        return float(self._t[-1])

    def discount(self, t):
        t_arr = np.asarray(t, dtype=np.float64)
        self._check_range(t_arr, closed=True, what="discount")
        idx = self._interval(t_arr)
        price = self._p[idx] * np.exp(-self._fwd[idx] * (t_arr - self._t[idx]))
        price = np.where(t_arr == self._t[-1], self._p[-1], price)
        return _as_output(t, price)

    def forward_rate(self, t):
        t_arr = np.asarray(t, dtype=np.float64)
        self._check_range(t_arr, closed=False, what="forward_rate")
        return _as_output(t, self._fwd[self._interval(t_arr)])

    def integrated_forward(self, t):
        """-ln P(0, t), integrating the piecewise-constant forward exactly."""
        t_arr = np.asarray(t, dtype=np.float64)
        self._check_range(t_arr, closed=True, what="integrated_forward")
        idx = self._interval(t_arr)
        value = -self._log_p[idx] + self._fwd[idx] * (t_arr - self._t[idx])
        return _as_output(t, value)

    def is_non_increasing(self) -> bool:
        return bool(np.all(np.diff(self._p) <= 0.0))

    # Internals
    def _interval(self, t: np.ndarray) -> np.ndarray:
        idx = np.searchsorted(self._t, t, side="right") - 1
        return np.clip(idx, 0, self._t.size - 2)

    def _check_range(self, t: np.ndarray, closed: bool, what: str) -> None:
        last = self._t[-1]
        above = t > last if closed else t >= last
        if np.any(t < 0.0) or np.any(above) or np.any(np.isnan(t)):
            bound = "]" if closed else ")"
            raise DiscountCurve.OutOfRange(
                f"{what}: t={_describe(t)} outside [0, {last:g}{bound}"
            )

    _t: np.ndarray
    _p: np.ndarray
    _log_p: np.ndarray
    _fwd: np.ndarray


################################################################################


def _as_output(t_in, values: np.ndarray):
    if np.ndim(t_in) == 0:
        return float(values)
    return values


def _describe(t: np.ndarray) -> str:
    if t.ndim == 0:
        return f"{float(t):g}"
    return f"[{float(t.min()):g}, {float(t.max()):g}]"
