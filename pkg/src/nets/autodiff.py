"""
Reverse-mode automatic differentiation over complex numpy tensors.

Every node stores its value, its adjoint ``grad`` and a closure that pushes
the adjoint to its parents. Adjoints follow the convention

    grad = dL/d(Re z) + i dL/d(Im z)

for a real loss L, so ``z - lr * grad`` is a descent step. With it a
holomorphic op y = a z sends ``conj(a) * grad_y`` back to z, and split
real/imaginary activations act on the two parts of the adjoint separately.
Real-valued tensors keep real adjoints.
"""

import logging
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np

logger = logging.getLogger(__name__)

ArrayLike = Union[np.ndarray, float, complex, int]

_EINSUM_OPTIMIZE = "greedy"


def _unbroadcast(g: np.ndarray, shape: Tuple[int, ...]) -> np.ndarray:
    """Sum an adjoint back down to the shape of a broadcast operand."""
    while g.ndim > len(shape):
        g = g.sum(axis=0)
    for axis, n in enumerate(shape):
        if n == 1 and g.shape[axis] != 1:
            g = g.sum(axis=axis, keepdims=True)
    return g


class DiffTensor:
    """A tensor that records the operations applied to it."""

    __array_priority__ = 1000

    def __init__(self, value: ArrayLike, _children: tuple = (), _op: str = "", name: str = ""):
        self.value = np.asarray(value)
        self.grad: Optional[np.ndarray] = None
        self._backward: Callable[[], None] = lambda: None
        self._prev = tuple(c for c in _children if isinstance(c, DiffTensor))
        self._op = _op
        self.name = name

    # -- bookkeeping ---------------------------------------------------------

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.value.shape

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.value)

    @property
    def is_leaf(self) -> bool:
        return self._op == ""

    def _accumulate(self, g: np.ndarray) -> None:
        g = _unbroadcast(np.asarray(g), self.value.shape)
        if not self.is_complex:
            g = g.real
        self.grad = g.copy() if self.grad is None else self.grad + g

    def backward(self) -> None:
        """Backpropagate from a scalar: every node is visited once, in reverse topological order."""
        if self.value.size != 1:
            raise ValueError("backward() needs a scalar output")
        topo = []
        visited = set()

        def build_topo(v):
            if id(v) not in visited:
                visited.add(id(v))
                for child in v._prev:
                    build_topo(child)
                topo.append(v)

        build_topo(self)
        self.grad = np.ones_like(self.value, dtype=np.float64)
        for v in reversed(topo):
            v._backward()

    def __repr__(self):
        return f"DiffTensor(shape={self.shape}, op={self._op!r}, complex={self.is_complex})"

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        other_t = other if isinstance(other, DiffTensor) else None
        other_v = other.value if other_t is not None else np.asarray(other)
        out = DiffTensor(self.value + other_v, (self, other_t), "+")

        def _backward():
            self._accumulate(out.grad)
            if other_t is not None:
                other_t._accumulate(out.grad)

        out._backward = _backward
        return out

    def __mul__(self, other):
        other_t = other if isinstance(other, DiffTensor) else None
        other_v = other.value if other_t is not None else np.asarray(other)
        out = DiffTensor(self.value * other_v, (self, other_t), "*")

        def _backward():
            self._accumulate(np.conj(other_v) * out.grad)
            if other_t is not None:
                other_t._accumulate(np.conj(self.value) * out.grad)

        out._backward = _backward
        return out

    def __neg__(self):
        return self * -1.0

    def __radd__(self, other):
        return self + other

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __rmul__(self, other):
        return self * other

    def __matmul__(self, other):
        return einsum("...ij,...jk->...ik", self, other)

    # -- reductions and parts ------------------------------------------------

    def sum(self, axis=None) -> "DiffTensor":
        out = DiffTensor(np.sum(self.value, axis=axis), (self,), "sum")

        def _backward():
            g = out.grad
            if axis is not None:
                g = np.expand_dims(g, axis)
            self._accumulate(np.broadcast_to(g, self.value.shape))

        out._backward = _backward
        return out

    def real(self) -> "DiffTensor":
        out = DiffTensor(np.real(self.value).copy(), (self,), "real")

        def _backward():
            self._accumulate(np.real(out.grad))

        out._backward = _backward
        return out

    def sum_squares(self, axis=None) -> "DiffTensor":
        """sum |z|^2 (real)."""
        out = DiffTensor(np.sum(np.abs(self.value) ** 2, axis=axis), (self,), "sum|.|^2")

        def _backward():
            g = np.real(out.grad)
            if axis is not None:
                g = np.expand_dims(g, axis)
            self._accumulate(2.0 * self.value * g)

        out._backward = _backward
        return out

    def sqrt(self) -> "DiffTensor":
        """Square root of a real, positive tensor."""
        root = np.sqrt(self.value)
        out = DiffTensor(root, (self,), "sqrt")

        def _backward():
            self._accumulate(np.real(out.grad) / (2.0 * root))

        out._backward = _backward
        return out

    def reshape(self, *shape) -> "DiffTensor":
        out = DiffTensor(self.value.reshape(*shape), (self,), "reshape")

        def _backward():
            self._accumulate(out.grad.reshape(self.value.shape))

        out._backward = _backward
        return out


def as_tensor(x) -> DiffTensor:
    return x if isinstance(x, DiffTensor) else DiffTensor(x)


def _split_subscripts(subscripts: str) -> Tuple[Sequence[str], str]:
    if "->" not in subscripts:
        raise ValueError("einsum subscripts must be explicit ('...->...')")
    lhs, rhs = subscripts.replace(" ", "").split("->")
    return lhs.split(","), rhs


def einsum(subscripts: str, *operands) -> DiffTensor:
    """
    Differentiable ``np.einsum``. Non-DiffTensor operands are constants.

    The adjoint of operand i is the einsum of the output adjoint with the
    conjugates of the other operands; indices that appear only in operand i
    are broadcast back.
    """
    inputs, output = _split_subscripts(subscripts)
    if len(inputs) != len(operands):
        raise ValueError(f"{len(inputs)} subscripts for {len(operands)} operands")
    values = [op.value if isinstance(op, DiffTensor) else np.asarray(op) for op in operands]
    out = DiffTensor(np.einsum(subscripts, *values, optimize=_EINSUM_OPTIMIZE), tuple(operands), "einsum")

    def _backward():
        g = out.grad
        for i, op in enumerate(operands):
            if not isinstance(op, DiffTensor):
                continue
            target = inputs[i]
            others = [inputs[j] for j in range(len(inputs)) if j != i]
            other_vals = [np.conj(values[j]) for j in range(len(inputs)) if j != i]
            if "..." in target:
                # ellipsis only for matmul-style batch dims shared with the output
                reduced = target
            else:
                present = set(output).union(*[set(s) for s in others]) if others else set(output)
                reduced = "".join(c for c in target if c in present)
            expr = ",".join([output] + others) + "->" + reduced
            grad = np.einsum(expr, g, *other_vals, optimize=_EINSUM_OPTIMIZE)
            if reduced != target:
                expand = [k for k, c in enumerate(target) if c not in reduced]
                grad = np.broadcast_to(np.expand_dims(grad, tuple(expand)), values[i].shape)
            op._accumulate(grad)

    out._backward = _backward
    return out


def split_activation(x: DiffTensor, fn: Callable, dfn: Callable, name: str) -> DiffTensor:
    """
    fn applied to real and imaginary parts separately (just the real part for
    real tensors); dfn is its derivative.
    """
    v = x.value
    if np.iscomplexobj(v):
        value = fn(v.real) + 1j * fn(v.imag)
    else:
        value = fn(v)
    out = DiffTensor(value, (x,), name)

    def _backward():
        g = out.grad
        if np.iscomplexobj(v):
            x._accumulate(dfn(v.real) * np.real(g) + 1j * dfn(v.imag) * np.imag(g))
        else:
            x._accumulate(dfn(v) * np.real(g))

    out._backward = _backward
    return out
