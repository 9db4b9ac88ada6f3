"""Two-node Matrix Product Operator layer.

The d^2 x d^2 weight matrix is never a parameter itself; it is rebuilt from
the cores on every forward pass as

    W = sum_alpha A_alpha (x) B_alpha,
    W[i1 * d + i2, j1 * d + j2] = sum_alpha A[i1, alpha, j1] B[i2, alpha, j2]

so gradients reach the 2 chi d^2 core entries through the contraction.
"""

import math

import numpy as np

from SwaptionPricer.NN.DenseLayer import glorot_limit
from SwaptionPricer.NN.ILayer import Activation
from SwaptionPricer.NN.ILayer import ILayer
from SwaptionPricer.NN.Tensor import einsum
from SwaptionPricer.NN.Tensor import parameter
from SwaptionPricer.NN.Tensor import Tensor

################################################################################


def physical_dim(width: int) -> int:
    d = math.isqrt(width)
    if d * d != width:
        raise ILayer.WidthMismatch(
            f"MPO layer width {width} is not a perfect square"
        )
    return d


class MpoLayer(ILayer):
    def __init__(
        self,
        d_phys: int,
        chi: int,
        activation: Activation | str = Activation.TANH,
        w1=None,
        w2=None,
        bias=None,
    ):
        if d_phys < 1 or chi < 1:
            raise ValueError(f"need d_phys, chi >= 1, got {d_phys}, {chi}")
        self.d_phys, self.chi = d_phys, chi
        self.in_width = self.out_width = d_phys * d_phys
        self.activation = Activation(activation)
        core_shape = (d_phys, chi, d_phys)
        self.w1 = parameter(np.zeros(core_shape) if w1 is None else w1)
        self.w2 = parameter(np.zeros(core_shape) if w2 is None else w2)
        self.bias = parameter(
            np.zeros(self.out_width) if bias is None else bias
        )
        if self.w1.shape != core_shape or self.w2.shape != core_shape:
            raise ILayer.WidthMismatch(
                f"MPO cores must be {core_shape}, got {self.w1.shape} "
                f"and {self.w2.shape}"
            )
        if self.bias.shape != (self.out_width,):
            raise ILayer.WidthMismatch(
                f"MPO bias must have {self.out_width} entries"
            )
        self._check_finite()

    @classmethod
    def glorot(
        cls,
        d_phys: int,
        chi: int,
        activation: Activation | str,
        rng: np.random.Generator,
    ) -> "MpoLayer":
        # Var(W_ij) = chi * s^4 matches the Glorot variance 2 / (2 d^2)
        width = d_phys * d_phys
        target_var = glorot_limit(width, width) ** 2 / 3.0
        s = (target_var / chi) ** 0.25
        shape = (d_phys, chi, d_phys)
        w1 = rng.normal(0.0, s, size=shape)
        w2 = rng.normal(0.0, s, size=shape)
        return cls(d_phys, chi, activation, w1=w1, w2=w2)

    def weight(self) -> Tensor:
        width = self.in_width
        return einsum("iaj,kal->ikjl", self.w1, self.w2).reshape(width, width)

    def parameters(self) -> list[Tensor]:
        return [self.w1, self.w2, self.bias]

    d_phys: int
    chi: int
    w1: Tensor
    w2: Tensor


def mpo_contract(layer: MpoLayer) -> np.ndarray:
    return layer.weight().data.copy()
