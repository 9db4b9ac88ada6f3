import math
import re
from dataclasses import dataclass

import numpy as np

from SwaptionPricer.NN.DenseLayer import DenseLayer
from SwaptionPricer.NN.ILayer import Activation
from SwaptionPricer.NN.ILayer import ILayer
from SwaptionPricer.NN.MpoLayer import MpoLayer
from SwaptionPricer.NN.MpoLayer import physical_dim
from SwaptionPricer.NN.Tensor import Tensor
from SwaptionPricer.Simulation.Paths import RngSpec

################################################################################


_ARCH_RE = re.compile(
    r"^(?P<kind>dnn|tnn|dense|mpo):(?:(?P<layers>\d+)x(?P<width>\d+)"
    r"|(?P<widths>\d+(?:,\d+)*))$"
)
_KIND_ALIASES = {"dense": "dnn", "mpo": "tnn"}


@dataclass(frozen=True)
class ArchSpec:
    """Hidden widths of a DNN(x, y, ...) or TNN(x, y, ...).

    A TNN starts with a dense layer mapping the input to the first width and
    continues with square MPO layers, so all its widths must be one perfect
    square. Both kinds end in a dense identity layer of width 1.
    """

    kind: str
    widths: tuple[int, ...]
    chi: int = 2
    input_width: int = 7
    output_width: int = 1

    def __post_init__(self):
        kind = _KIND_ALIASES.get(self.kind, self.kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "widths", tuple(int(w) for w in self.widths))
        if kind not in ("dnn", "tnn"):
            raise ValueError(f"unknown architecture kind '{self.kind}'")
        if not self.widths or min(self.widths) < 1:
            raise ValueError(f"invalid hidden widths {self.widths}")
        if self.input_width < 1 or self.output_width < 1:
            raise ValueError("input and output widths must be positive")
        if kind == "tnn":
            if len(self.widths) < 2:
                raise ValueError("a TNN needs a dense layer and an MPO layer")
            if len(set(self.widths)) != 1:
                raise ValueError(
                    f"TNN layers must share one width, got {self.widths}"
                )
            physical_dim(self.widths[0])
            if self.chi < 1:
                raise ValueError(f"bond dimension must be >= 1: {self.chi}")

    @classmethod
    def parse(cls, text: str, chi: int = 2, input_width: int = 7):
        match = _ARCH_RE.match(text.strip().lower())
        if match is None:
            raise ValueError(
                f"cannot parse architecture '{text}', expected e.g. "
                "'tnn:2x64' or 'dnn:24,27'"
            )
        if match["widths"] is not None:
            widths = tuple(int(w) for w in match["widths"].split(","))
        else:
            widths = (int(match["width"]),) * int(match["layers"])
        return cls(match["kind"], widths, chi, input_width)

    @property
    def label(self) -> str:
        return f"{self.kind.upper()}({','.join(map(str, self.widths))})"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "widths": list(self.widths),
            "chi": self.chi,
            "input_width": self.input_width,
            "output_width": self.output_width,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "ArchSpec":
        return cls(
            raw["kind"],
            tuple(raw["widths"]),
            int(raw["chi"]),
            int(raw["input_width"]),
            int(raw["output_width"]),
        )


################################################################################


@dataclass(eq=False)
class Tape:
    """A scalar loss together with the parameter versions it was built on."""

    network: "Network"
    loss: Tensor
    versions: tuple[int, ...]


class Network:
    """Layers applied to (X, Y, t) rows; t is the last input column.

    ``time_origin`` is subtracted from t before the first layer, so a network
    trained on [T_a, T_b] sees times starting at zero.
    """

    # Exceptions
    class StaleTape(RuntimeError):
        pass

    # API
    def __init__(
        self,
        layers: list[ILayer],
        arch: ArchSpec | None = None,
        time_origin: float = 0.0,
    ):
        for prev, nxt in zip(layers, layers[1:]):
            if prev.out_width != nxt.in_width:
                raise ILayer.WidthMismatch(
                    f"layer widths {prev.out_width} -> {nxt.in_width} "
                    "do not chain"
                )
        self.layers = layers
        self.arch = arch
        self.time_origin = float(time_origin)

    @property
    def in_width(self) -> int:
        return self.layers[0].in_width

    @property
    def out_width(self) -> int:
        return self.layers[-1].out_width

    def parameters(self) -> list[Tensor]:
        return [p for layer in self.layers for p in layer.parameters()]

    def forward(self, x) -> Tensor:
        h = Tensor.lift(x)
        if self.time_origin != 0.0:
            h = h - self._time_offset()
        for layer in self.layers:
            h = layer.forward(h)
        return h

    def forward_with_input_grad(
        self, x: np.ndarray, coords
    ) -> tuple[Tensor, Tensor]:
        """Values [B] and d(value)/d(x[:, coords]) [B x p], both on the tape."""
        coords = list(coords)
        batch = x.shape[0]
        seed = np.zeros((batch, self.in_width, len(coords)))
        seed[:, coords, np.arange(len(coords))] = 1.0
        if self.time_origin != 0.0:
            x = x - self._time_offset()
        h, tangent = Tensor(x), Tensor(seed)
        for layer in self.layers:
            h, tangent = layer.forward_with_tangent(h, tangent)
        return h.reshape(batch), tangent.reshape(batch, len(coords))

    def tape(self, loss: Tensor) -> Tape:
        return Tape(self, loss, self._versions())

    def flat_parameters(self) -> np.ndarray:
        return np.concatenate([p.data.reshape(-1) for p in self.parameters()])

    def load_flat_parameters(self, flat: np.ndarray) -> None:
        flat = np.asarray(flat, dtype=np.float64)
        if flat.size != param_count(self):
            raise ValueError(
                f"expected {param_count(self)} parameters, got {flat.size}"
            )
        offset = 0
        for p in self.parameters():
            size = p.data.size
            p.assign(flat[offset : offset + size].reshape(p.shape))
            offset += size

    def copy_parameters_from(self, other: "Network") -> None:
        self.load_flat_parameters(other.flat_parameters())

    # Internals
    def _versions(self) -> tuple[int, ...]:
        return tuple(p.version for p in self.parameters())

    def _time_offset(self) -> np.ndarray:
        offset = np.zeros(self.in_width)
        offset[-1] = self.time_origin
        return offset

    layers: list[ILayer]
    arch: ArchSpec | None
    time_origin: float


################################################################################


def build_network(arch: ArchSpec, rng: np.random.Generator | None = None):
    """Layers for ``arch``; zero parameters when no generator is given."""

    def dense(fan_in: int, fan_out: int, act: Activation) -> DenseLayer:
        if rng is None:
            return DenseLayer(fan_in, fan_out, act)
        return DenseLayer.glorot(fan_in, fan_out, act, rng)

    def mpo(width: int) -> MpoLayer:
        d_phys = physical_dim(width)
        if rng is None:
            return MpoLayer(d_phys, arch.chi, Activation.TANH)
        return MpoLayer.glorot(d_phys, arch.chi, Activation.TANH, rng)

    layers: list[ILayer] = [
        dense(arch.input_width, arch.widths[0], Activation.TANH)
    ]
    for fan_in, fan_out in zip(arch.widths, arch.widths[1:]):
        if arch.kind == "tnn":
            layers.append(mpo(fan_out))
        else:
            layers.append(dense(fan_in, fan_out, Activation.TANH))
    layers.append(dense(arch.widths[-1], arch.output_width, Activation.IDENTITY))
    return Network(layers, arch)


def init_network(arch: ArchSpec, rng: RngSpec) -> Network:
    return build_network(arch, rng.generator())


def param_count(net: Network) -> int:
    return int(sum(layer.param_count() for layer in net.layers))


def arch_param_count(arch: ArchSpec) -> int:
    """Closed-form count, equal to param_count(build_network(arch))."""
    count = arch.input_width * arch.widths[0] + arch.widths[0]
    for fan_in, fan_out in zip(arch.widths, arch.widths[1:]):
        if arch.kind == "tnn":
            d_phys = math.isqrt(fan_out)
            count += 2 * arch.chi * d_phys**2 + fan_out
        else:
            count += fan_in * fan_out + fan_out
    count += arch.widths[-1] * arch.output_width + arch.output_width
    return count


def forward(net: Network, x: np.ndarray) -> np.ndarray:
    return net.forward(x).data


def grad_params(net: Network, tape: Tape) -> list[np.ndarray]:
    if tape.network is not net or tape.versions != net._versions():
        raise Network.StaleTape(
            "loss was built before the last parameter update; "
            "run the forward pass again"
        )
    tape.loss.backward()
    return [
        np.zeros(p.shape) if p.grad is None else p.grad
        for p in net.parameters()
    ]


def grad_input(net: Network, x: np.ndarray) -> np.ndarray:
    """d(output)/d(input) per sample for a width-1 output, by a reverse pass."""
    inputs = Tensor(np.asarray(x, dtype=np.float64), requires_grad=True)
    out = net.forward(inputs)
    # samples are independent, so the gradient of the sum is per-sample
    out.sum().backward()
    return inputs.grad
