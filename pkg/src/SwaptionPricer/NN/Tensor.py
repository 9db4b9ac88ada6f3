"""Array-valued reverse-mode automatic differentiation.

Every operation returns a new Tensor that remembers its parents and a closure
pushing its gradient back to them; ``backward`` walks the graph in reverse
topological order. Values are float64 numpy arrays.
"""

import numpy as np

################################################################################


def _unbroadcast(grad: np.ndarray, shape: tuple) -> np.ndarray:
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, size in enumerate(shape):
        if size == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


def _einsum_parts(spec: str) -> tuple[str, str, str]:
    inputs, out = spec.replace(" ", "").split("->")
    a, b = inputs.split(",")
    return a, b, out


################################################################################


class Tensor:
    def __init__(self, data, requires_grad=False, _prev=(), _op=""):
        self.data = np.asarray(data, dtype=np.float64)
        self.grad = None
        self.requires_grad = requires_grad or any(
            p.requires_grad for p in _prev
        )
        self._prev = _prev if self.requires_grad else ()
        self._op = _op
        self._backprop = None
        self.version = 0

    @staticmethod
    def lift(other) -> "Tensor":
        return other if isinstance(other, Tensor) else Tensor(other)

    @property
    def shape(self) -> tuple:
        return self.data.shape

    def item(self) -> float:
        return float(self.data)

    def numpy(self) -> np.ndarray:
        return self.data

    def detach(self) -> "Tensor":
        return Tensor(self.data)

    def assign(self, values) -> None:
        """In-place update of a leaf; invalidates tapes built on it."""
        values = np.asarray(values, dtype=np.float64)
        if values.shape != self.shape:
            raise ValueError(f"cannot assign {values.shape} to {self.shape}")
        self.data = values.copy()
        self.version += 1

    # Arithmetic
    def __add__(self, other):
        other = Tensor.lift(other)
        out = Tensor(self.data + other.data, _prev=(self, other), _op="+")

        def _backprop():
            self._accumulate(_unbroadcast(out.grad, self.shape))
            other._accumulate(_unbroadcast(out.grad, other.shape))

        out._backprop = _backprop
        return out

    def __mul__(self, other):
        other = Tensor.lift(other)
        out = Tensor(self.data * other.data, _prev=(self, other), _op="*")

        def _backprop():
            self._accumulate(_unbroadcast(out.grad * other.data, self.shape))
            other._accumulate(_unbroadcast(out.grad * self.data, other.shape))

        out._backprop = _backprop
        return out

    def __pow__(self, exponent: float):
        out = Tensor(self.data**exponent, _prev=(self,), _op=f"**{exponent}")

        def _backprop():
            local = exponent * self.data ** (exponent - 1)
            self._accumulate(out.grad * local)

        out._backprop = _backprop
        return out

    def __neg__(self):
        return self * -1.0

    def __radd__(self, other):
        return self + other

    def __sub__(self, other):
        return self + (-Tensor.lift(other))

    def __rsub__(self, other):
        return Tensor.lift(other) + (-self)

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, other):
        if isinstance(other, Tensor):
            return self * other**-1.0
        return self * (1.0 / np.asarray(other, dtype=np.float64))

    def __matmul__(self, other):
        return einsum("ij,jk->ik", self, Tensor.lift(other))

    # Elementwise functions
    def tanh(self):
        value = np.tanh(self.data)
        out = Tensor(value, _prev=(self,), _op="tanh")

        def _backprop():
            self._accumulate(out.grad * (1.0 - value * value))

        out._backprop = _backprop
        return out

    # Shape and reductions
    def sum(self, axis=None):
        out = Tensor(self.data.sum(axis=axis), _prev=(self,), _op="sum")

        def _backprop():
            grad = out.grad
            if axis is not None:
                grad = np.expand_dims(grad, axis)
            self._accumulate(np.broadcast_to(grad, self.shape))

        out._backprop = _backprop
        return out

    def mean(self):
        return self.sum() / self.data.size

    def reshape(self, *shape):
        out = Tensor(self.data.reshape(*shape), _prev=(self,), _op="reshape")

        def _backprop():
            self._accumulate(out.grad.reshape(self.shape))

        out._backprop = _backprop
        return out

    def __getitem__(self, index):
        out = Tensor(self.data[index], _prev=(self,), _op="getitem")

        def _backprop():
            grad = np.zeros(self.shape)
            np.add.at(grad, index, out.grad)
            self._accumulate(grad)

        out._backprop = _backprop
        return out

    # Reverse pass
    def backward(self, seed=None) -> None:
        order = self._topological_order()
        for node in order:
            node.grad = None
        self.grad = (
            np.ones(self.shape)
            if seed is None
            else np.broadcast_to(np.asarray(seed, dtype=np.float64), self.shape)
        )
        for node in reversed(order):
            if node._backprop is not None and node.grad is not None:
                node._backprop()

    def _accumulate(self, grad: np.ndarray) -> None:
        if not self.requires_grad:
            return
        self.grad = grad.copy() if self.grad is None else self.grad + grad

    def _topological_order(self) -> list["Tensor"]:
        order, visited = [], set()
        stack = [(self, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                order.append(node)
                continue
            if id(node) in visited:
                continue
            visited.add(id(node))
            stack.append((node, True))
            for parent in node._prev:
                if id(parent) not in visited:
                    stack.append((parent, False))
        return order

    def __repr__(self):
        return f"Tensor(shape={self.shape}, op='{self._op}')"

    data: np.ndarray
    grad: np.ndarray | None
    requires_grad: bool
    version: int


################################################################################


def parameter(data) -> Tensor:
    return Tensor(np.array(data, dtype=np.float64), requires_grad=True)


def einsum(spec: str, a: Tensor, b: Tensor) -> Tensor:
    """Two-operand einsum; every index of an operand must appear elsewhere."""
    a, b = Tensor.lift(a), Tensor.lift(b)
    sa, sb, so = _einsum_parts(spec)
    value = np.einsum(spec, a.data, b.data, optimize=True)
    out = Tensor(value, _prev=(a, b), _op=f"einsum[{spec}]")

    def _backprop():
        if a.requires_grad:
            ga = np.einsum(f"{so},{sb}->{sa}", out.grad, b.data, optimize=True)
            a._accumulate(ga)
        if b.requires_grad:
            gb = np.einsum(f"{so},{sa}->{sb}", out.grad, a.data, optimize=True)
            b._accumulate(gb)

    out._backprop = _backprop
    return out
