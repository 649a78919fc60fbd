"""
Layer algebra of spectral neural operators.

A batch of function matrices is a tensor of shape (batch, *coeff_axes, features):
each column (last axis) is a function, the middle axes index its
coefficients (or its grid values for the grid-space variants).

* N1 / N3: U A + b, mixing functions pointwise, b a constant function;
* N2: B U A + b with B a low-rank integral operator acting on the coefficient
  axis (one B per axis in 2D) and b a full r x m bias.
"""

from typing import Optional, Sequence

import numpy as np

from ..spectral.aliasing import Activation
from .autodiff import DiffTensor, einsum, split_activation

SPATIAL = "xyz"
TARGET = "pqr"


def _softplus(y):
    return np.logaddexp(0.0, y)


def _sigmoid(y):
    return 0.5 * (1.0 + np.tanh(0.5 * y))


def _relu(y):
    return np.maximum(y, 0.0)


def _relu_grad(y):
    return (y > 0.0).astype(np.float64)


def _tanh_grad(y):
    return 1.0 - np.tanh(y) ** 2


_ACTIVATIONS = {
    Activation.SOFTPLUS: (_softplus, _sigmoid),
    Activation.RELU: (_relu, _relu_grad),
    Activation.TANH: (np.tanh, _tanh_grad),
    Activation.SQUARE: (lambda y: y * y, lambda y: 2.0 * y),
}


def activation_apply(x: DiffTensor, activation) -> DiffTensor:
    """sigma(Re x) + i sigma(Im x) for complex tensors, sigma(x) for real ones."""
    activation = Activation(activation)
    if activation is Activation.IDENTITY:
        return x
    fn, dfn = _ACTIVATIONS[activation]
    return split_activation(x, fn, dfn, activation.value)


def constant_function_mask(coeff_shape: Sequence[int], grid_space: bool) -> np.ndarray:
    """
    Where a constant function lives: coefficient index 0 on every axis in
    coefficient space, every node in grid space.
    """
    if grid_space:
        return np.ones(tuple(coeff_shape))
    mask = np.zeros(tuple(coeff_shape))
    mask[(0,) * len(coeff_shape)] = 1.0
    return mask


def n1_layer(
    U: DiffTensor,
    A,
    b=None,
    activation=Activation.IDENTITY,
    grid_space: bool = False,
) -> DiffTensor:
    """
    Pointwise layer sigma(U A + b).

    Args:
        U: (batch, *coeff_axes, l) function matrix
        A: (l, m) weights
        b: (m,) bias; adds the constant function b_j to output column j
        activation: split activation
        grid_space: U holds grid values rather than coefficients

    Returns:
        (batch, *coeff_axes, m) function matrix
    """
    dim = U.value.ndim - 2
    s = SPATIAL[:dim]
    out = einsum(f"b{s}l,lm->b{s}m", U, A)
    if b is not None:
        mask = constant_function_mask(U.shape[1:-1], grid_space)[..., None]
        out = out + (b * mask if isinstance(b, DiffTensor) else np.asarray(b) * mask)
    return activation_apply(out, activation)


def n2_layer(
    U: DiffTensor,
    Bs: Sequence,
    A,
    b=None,
    activation=Activation.IDENTITY,
) -> DiffTensor:
    """
    Integral-operator layer sigma(B U A + b).

    Args:
        U: (batch, *coeff_axes, l) function matrix
        Bs: one (r_d, k_d) matrix per coefficient axis
        A: (l, m) weights
        b: (*r, m) bias
        activation: split activation

    Returns:
        (batch, *r, m) function matrix
    """
    dim = U.value.ndim - 2
    if len(Bs) != dim:
        raise ValueError(f"need {dim} integral operators, got {len(Bs)}")
    s, t = SPATIAL[:dim], TARGET[:dim]
    subs = ",".join(f"{t[d]}{s[d]}" for d in range(dim))
    out = einsum(f"{subs},b{s}l,lm->b{t}m", *Bs, U, A)
    if b is not None:
        out = out + b
    return activation_apply(out, activation)


def axis_linear(U: DiffTensor, M, axis: int) -> DiffTensor:
    """Apply a fixed or trainable matrix along one coefficient/grid axis of (batch, *axes, features)."""
    dim = U.value.ndim - 2
    s = SPATIAL[:dim]
    t = s[:axis] + "q" + s[axis + 1:]
    return einsum(f"q{s[axis]},b{s}l->b{t}l", M, U)


def dense(x: DiffTensor, W, b=None, activation: Optional[Activation] = None) -> DiffTensor:
    """Fully connected layer on the last axis: sigma(x W + b)."""
    nd = x.value.ndim
    lead = "abcdefgh"[: nd - 1]
    out = einsum(f"{lead}i,io->{lead}o", x, W)
    if b is not None:
        out = out + b
    if activation is None:
        return out
    return activation_apply(out, activation)
