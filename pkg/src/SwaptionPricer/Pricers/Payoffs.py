"""Exercise values of payer swaptions from simulated factors.

Exercising at T_m pays (1 - P(T_m, T_n) - K sum_{l>m} P(T_m, T_l) dT_l)_+,
with every bond rebuilt from (X, Y) at T_m.
"""

import numpy as np

from SwaptionPricer.Model.Cheyette import CheyetteParams
from SwaptionPricer.Model.Cheyette import FactorState
from SwaptionPricer.Model.Cheyette import zcb_price
from SwaptionPricer.Model.Swaption import ExerciseStyle
from SwaptionPricer.Model.Swaption import SwaptionSpec
from SwaptionPricer.Simulation.Paths import PathBatch

################################################################################


def exercise_value(
    params: CheyetteParams,
    spec: SwaptionSpec,
    m: int,
    x: np.ndarray,
    y: np.ndarray,
) -> np.ndarray:
    """Payoff of exercising at T_m for factor states x, y of shape [M x d]."""
    if m == spec.n:
        return np.zeros(x.shape[0])
    state = FactorState(spec.tenor[m], x, y)
    accruals = spec.accruals
    annuity = np.zeros(x.shape[0])
    bond = None
    for ell in range(m + 1, spec.n + 1):
        bond = zcb_price(params, state, spec.tenor[ell])
        annuity = annuity + bond * accruals[ell - 1]
    return np.maximum(1.0 - bond - spec.fixed_rate * annuity, 0.0)


def european_terminal(
    params: CheyetteParams, spec: SwaptionSpec, paths: PathBatch
) -> np.ndarray:
    _require_style(spec, ExerciseStyle.EUROPEAN)
    # paths may stop at T_0
    k0 = paths.grid.index_of(spec.tenor[0])
    return exercise_value(params, spec, 0, paths.x[:, k0], paths.y[:, k0])


def bermudan_payoffs(
    params: CheyetteParams, spec: SwaptionSpec, paths: PathBatch
) -> np.ndarray:
    """[M x (n+1)] matrix of exercise values at T_0..T_n."""
    _require_style(spec, ExerciseStyle.BERMUDAN)
    ks = spec.exercise_indices(paths.grid)
    columns = [
        exercise_value(params, spec, m, paths.x[:, k], paths.y[:, k])
        for m, k in enumerate(ks)
    ]
    return np.stack(columns, axis=1)


def pathwise_discount(
    params: CheyetteParams, paths: PathBatch, k_end: int
) -> np.ndarray:
    """exp(-sum_{k < k_end} r^{j,k} dt) with r = f(0, t_k) + sum_i X_i."""
    grid = paths.grid
    if k_end == 0:
        return np.ones(paths.m_paths)
    t = grid.points[:k_end]
    rates = params.curve.forward_rate(t)[None, :] + paths.x[:, :k_end].sum(-1)
    return np.exp(-rates.sum(axis=1) * grid.dt)


def short_rates(
    params: CheyetteParams, paths: PathBatch, k_lo: int, k_hi: int
) -> np.ndarray:
    """r^{j,k} for k = k_lo..k_hi, laid out k-major: [K x M]."""
    t = paths.grid.points[k_lo : k_hi + 1]
    x_sum = paths.x[:, k_lo : k_hi + 1].sum(-1).T
    return params.curve.forward_rate(t)[:, None] + x_sum


def _require_style(spec: SwaptionSpec, style: ExerciseStyle) -> None:
    if spec.style is not style:
        raise SwaptionSpec.Invalid(
            f"expected a {style.value} swaption, got {spec.style.value}"
        )
