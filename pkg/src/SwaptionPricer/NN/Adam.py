from dataclasses import dataclass
from dataclasses import field

import numpy as np

from SwaptionPricer.NN.Tensor import Tensor

################################################################################


class AdamState:
    # Exceptions
    class NonFiniteGradient(FloatingPointError):
        pass

    # API
    def __init__(
        self,
        shapes,
        beta1: float = 0.9,
        beta2: float = 0.999,
        eps: float = 1e-8,
    ):
        self.m = [np.zeros(s) for s in shapes]
        self.v = [np.zeros(s) for s in shapes]
        self.step = 0
        self.beta1, self.beta2, self.eps = beta1, beta2, eps

    @classmethod
    def for_parameters(cls, params: list[Tensor]) -> "AdamState":
        return cls([p.shape for p in params])

    m: list[np.ndarray]
    v: list[np.ndarray]
    step: int
    beta1: float
    beta2: float
    eps: float


def adam_step(
    state: AdamState,
    params: list[Tensor],
    grads: list[np.ndarray],
    lr: float,
) -> list[np.ndarray]:
    if len(params) != len(grads) or len(params) != len(state.m):
        raise ValueError(
            f"{len(params)} parameters, {len(grads)} gradients and "
            f"{len(state.m)} moment slots do not match"
        )
    for i, g in enumerate(grads):
        if g.shape != params[i].shape:
            raise ValueError(
                f"gradient {i} has shape {g.shape}, "
                f"parameter has {params[i].shape}"
            )
        if not np.all(np.isfinite(g)):
            raise AdamState.NonFiniteGradient(
                f"non-finite gradient for parameter {i} at step "
                f"{state.step + 1}"
            )

    state.step += 1
    b1, b2 = state.beta1, state.beta2
    correction1 = 1.0 - b1**state.step
    correction2 = 1.0 - b2**state.step
    updated = []
    for i, (p, g) in enumerate(zip(params, grads)):
        state.m[i] = b1 * state.m[i] + (1.0 - b1) * g
        state.v[i] = b2 * state.v[i] + (1.0 - b2) * g * g
        m_hat = state.m[i] / correction1
        v_hat = state.v[i] / correction2
        p.assign(p.data - lr * m_hat / (np.sqrt(v_hat) + state.eps))
        updated.append(p.data)
    return updated


################################################################################


@dataclass(frozen=True)
class LrSchedule:
    """Piecewise-constant rate: quarter i of the epochs uses rates[i]."""

    total_epochs: int
    rates: tuple[float, ...] = field(default=(1e-2, 1e-3, 1e-4, 1e-5))

    def __post_init__(self):
        pieces = len(self.rates)
        if self.total_epochs < pieces or self.total_epochs % pieces != 0:
            raise ValueError(
                f"epochs ({self.total_epochs}) must be a positive multiple "
                f"of {pieces}"
            )

    def rate(self, epoch: int) -> float:
        if not 0 <= epoch < self.total_epochs:
            raise ValueError(
                f"epoch {epoch} outside [0, {self.total_epochs})"
            )
        piece = epoch * len(self.rates) // self.total_epochs
        return self.rates[piece]
