from enum import Enum

import numpy as np

from SwaptionPricer.NN.Tensor import einsum
from SwaptionPricer.NN.Tensor import Tensor

################################################################################


class Activation(str, Enum):
    TANH = "tanh"
    IDENTITY = "identity"


class ILayer:
    """Affine map followed by an activation: a = act(W h + b)."""

    # Exceptions
    class WidthMismatch(ValueError):
        pass

    # API
    def weight(self) -> Tensor:
        raise NotImplementedError

    def parameters(self) -> list[Tensor]:
        raise NotImplementedError

    def param_count(self) -> int:
        return int(sum(p.data.size for p in self.parameters()))

    def forward(self, h: Tensor) -> Tensor:
        return self._activate(self._affine(h, self.weight()))

    def forward_with_tangent(
        self, h: Tensor, tangent: Tensor
    ) -> tuple[Tensor, Tensor]:
        """Propagate values and d(value)/d(input coords) [B x in x p]."""
        w = self.weight()
        out = self._activate(self._affine(h, w))
        pushed = einsum("oi,bip->bop", w, tangent)
        if self.activation is Activation.TANH:
            slope = 1.0 - out * out
            pushed = pushed * slope.reshape(*slope.shape, 1)
        return out, pushed

    # Internals
    def _affine(self, h: Tensor, w: Tensor) -> Tensor:
        if h.shape[-1] != self.in_width:
            raise ILayer.WidthMismatch(
                f"{type(self).__name__} expects width {self.in_width}, "
                f"got input of shape {h.shape}"
            )
        return einsum("bi,oi->bo", h, w) + self.bias

    def _activate(self, z: Tensor) -> Tensor:
        if self.activation is Activation.TANH:
            return z.tanh()
        return z

    def _check_finite(self) -> None:
        for p in self.parameters():
            if not np.all(np.isfinite(p.data)):
                raise ValueError(f"{type(self).__name__} has non-finite values")

    in_width: int
    out_width: int
    activation: Activation
    bias: Tensor
