import numpy as np

from SwaptionPricer.NN.ILayer import Activation
from SwaptionPricer.NN.ILayer import ILayer
from SwaptionPricer.NN.Tensor import parameter
from SwaptionPricer.NN.Tensor import Tensor

################################################################################


def glorot_limit(fan_in: int, fan_out: int) -> float:
    return float(np.sqrt(6.0 / (fan_in + fan_out)))


class DenseLayer(ILayer):
    def __init__(
        self,
        in_width: int,
        out_width: int,
        activation: Activation | str = Activation.TANH,
        weight=None,
        bias=None,
    ):
        self.in_width, self.out_width = in_width, out_width
        self.activation = Activation(activation)
        self.w = parameter(
            np.zeros((out_width, in_width)) if weight is None else weight
        )
        self.bias = parameter(np.zeros(out_width) if bias is None else bias)
        if self.w.shape != (out_width, in_width) or self.bias.shape != (
            out_width,
        ):
            raise ILayer.WidthMismatch(
                f"dense {in_width}->{out_width} got weight {self.w.shape} "
                f"and bias {self.bias.shape}"
            )
        self._check_finite()

    @classmethod
    def glorot(
        cls,
        in_width: int,
        out_width: int,
        activation: Activation | str,
        rng: np.random.Generator,
    ) -> "DenseLayer":
        limit = glorot_limit(in_width, out_width)
        weight = rng.uniform(-limit, limit, size=(out_width, in_width))
        return cls(in_width, out_width, activation, weight=weight)

    def weight(self) -> Tensor:
        return self.w

    def parameters(self) -> list[Tensor]:
        return [self.w, self.bias]

    w: Tensor
