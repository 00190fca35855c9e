"""
Primitive differentiable ops.

Broadcasting follows numpy rules; gradients of broadcast operands are summed
back to the operand shape. Domain checks run before the forward computation
and overflow is reported by ``record_op``.
"""

from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import special

from ..exceptions import DomainViolationException, ShapeMismatchException
from .tensor import ArrayLike, Tensor, as_tensor, record_op

_QUIET = dict(over="ignore", under="ignore", divide="ignore", invalid="ignore")


def _unbroadcast(grad: np.ndarray, shape: Tuple[int, ...]) -> np.ndarray:
    if grad.shape == shape:
        return grad
    extra = grad.ndim - len(shape)
    if extra > 0:
        grad = grad.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, dim in enumerate(shape) if dim == 1 and grad.shape[i] != 1)
    if axes:
        grad = grad.sum(axis=axes, keepdims=True)
    return grad.reshape(shape)


def _broadcast_shape(op: str, a: Tensor, b: Tensor) -> Tuple[int, ...]:
    try:
        return np.broadcast_shapes(a.shape, b.shape)
    except ValueError as e:
        raise ShapeMismatchException(op, [a.shape, b.shape]) from e


def _require_positive(op: str, x: Tensor) -> None:
    if not np.all(x.data > 0):
        raise DomainViolationException(op, "argument must be strictly positive")


# Binary arithmetic


def add(a: ArrayLike, b: ArrayLike) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    _broadcast_shape("add", a, b)
    with np.errstate(**_QUIET):
        out = a.data + b.data
    return record_op(
        "add", out, (a, b),
        lambda g: (_unbroadcast(g, a.shape), _unbroadcast(g, b.shape)),
    )


def sub(a: ArrayLike, b: ArrayLike) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    _broadcast_shape("sub", a, b)
    with np.errstate(**_QUIET):
        out = a.data - b.data
    return record_op(
        "sub", out, (a, b),
        lambda g: (_unbroadcast(g, a.shape), _unbroadcast(-g, b.shape)),
    )


def mul(a: ArrayLike, b: ArrayLike) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    _broadcast_shape("mul", a, b)
    with np.errstate(**_QUIET):
        out = a.data * b.data
    return record_op(
        "mul", out, (a, b),
        lambda g: (
            _unbroadcast(g * b.data, a.shape) if a.requires_grad else None,
            _unbroadcast(g * a.data, b.shape) if b.requires_grad else None,
        ),
    )


def div(a: ArrayLike, b: ArrayLike) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    _broadcast_shape("div", a, b)
    if np.any(b.data == 0):
        raise DomainViolationException("div", "division by zero")
    with np.errstate(**_QUIET):
        out = a.data / b.data

    def _backward(g: np.ndarray) -> Tuple[Optional[np.ndarray], ...]:
        ga = _unbroadcast(g / b.data, a.shape) if a.requires_grad else None
        gb = _unbroadcast(-g * out / b.data, b.shape) if b.requires_grad else None
        return ga, gb

    return record_op("div", out, (a, b), _backward)


def matmul(a: Tensor, b: Tensor) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ShapeMismatchException("matmul", [a.shape, b.shape])
    with np.errstate(**_QUIET):
        out = a.data @ b.data
    return record_op(
        "matmul", out, (a, b),
        lambda g: (
            g @ b.data.T if a.requires_grad else None,
            a.data.T @ g if b.requires_grad else None,
        ),
    )


def neg(a: ArrayLike) -> Tensor:
    a = as_tensor(a)
    return record_op("neg", -a.data, (a,), lambda g: (-g,))


# Shape ops


def broadcast_to(a: ArrayLike, shape: Sequence[int]) -> Tensor:
    a = as_tensor(a)
    shape = tuple(shape)
    try:
        out = np.broadcast_to(a.data, shape).copy()
    except ValueError as e:
        raise ShapeMismatchException("broadcast", [a.shape, shape]) from e
    return record_op("broadcast", out, (a,), lambda g: (_unbroadcast(g, a.shape),))


def reshape(a: Tensor, shape: Sequence[int]) -> Tensor:
    try:
        out = a.data.reshape(tuple(shape))
    except ValueError as e:
        raise ShapeMismatchException("reshape", [a.shape, tuple(shape)]) from e
    return record_op("reshape", out, (a,), lambda g: (g.reshape(a.shape),))


def transpose(a: Tensor) -> Tensor:
    if a.ndim != 2:
        raise ShapeMismatchException("transpose", [a.shape])
    return record_op("transpose", a.data.T.copy(), (a,), lambda g: (g.T,))


def concat(tensors: Sequence[ArrayLike], axis: int = -1) -> Tensor:
    parts = [as_tensor(t) for t in tensors]
    try:
        out = np.concatenate([t.data for t in parts], axis=axis)
    except ValueError as e:
        raise ShapeMismatchException("concat", [t.shape for t in parts]) from e
    bounds = np.cumsum([t.shape[axis] for t in parts])[:-1]

    def _backward(g: np.ndarray) -> Tuple[Optional[np.ndarray], ...]:
        return tuple(np.split(g, bounds, axis=axis))

    return record_op("concat", out, parts, _backward)


def slice(a: Tensor, index: object) -> Tensor:
    """Basic (non-fancy) indexing."""
    try:
        out = a.data[index]
    except IndexError as e:
        raise ShapeMismatchException("slice", [a.shape]) from e

    def _backward(g: np.ndarray) -> Tuple[np.ndarray]:
        full = np.zeros_like(a.data)
        np.add.at(full, index, g)
        return (full,)

    return record_op("slice", np.array(out, dtype=np.float64), (a,), _backward)


def take_rows(a: Tensor, rows: np.ndarray) -> Tensor:
    """Gather rows along axis 0; repeated rows accumulate their gradients."""
    rows = np.asarray(rows, dtype=np.int64)

    def _backward(g: np.ndarray) -> Tuple[np.ndarray]:
        full = np.zeros_like(a.data)
        np.add.at(full, rows, g)
        return (full,)

    return record_op("take_rows", a.data[rows], (a,), _backward)


# Elementwise nonlinearities


def relu(a: Tensor) -> Tensor:
    # Subgradient 0 at exactly 0.
    mask = a.data > 0
    return record_op("relu", np.where(mask, a.data, 0.0), (a,), lambda g: (g * mask,))


def softplus(a: Tensor) -> Tensor:
    out = np.logaddexp(0.0, a.data)
    return record_op("softplus", out, (a,), lambda g: (g * special.expit(a.data),))


def sigmoid(a: Tensor) -> Tensor:
    out = special.expit(a.data)
    return record_op("sigmoid", out, (a,), lambda g: (g * out * (1.0 - out),))


def exp(a: Tensor) -> Tensor:
    with np.errstate(**_QUIET):
        out = np.exp(a.data)
    return record_op("exp", out, (a,), lambda g: (g * out,))


def log(a: Tensor) -> Tensor:
    _require_positive("log", a)
    return record_op("log", np.log(a.data), (a,), lambda g: (g / a.data,))


def lgamma(a: Tensor) -> Tensor:
    _require_positive("lgamma", a)
    return record_op(
        "lgamma", special.gammaln(a.data), (a,), lambda g: (g * special.digamma(a.data),)
    )


def digamma(a: Tensor) -> Tensor:
    _require_positive("digamma", a)
    return record_op(
        "digamma", special.digamma(a.data), (a,),
        lambda g: (g * special.polygamma(1, a.data),),
    )


def square(a: Tensor) -> Tensor:
    with np.errstate(**_QUIET):
        out = a.data * a.data
    return record_op("square", out, (a,), lambda g: (2.0 * a.data * g,))


def clamp(a: Tensor, low: float = -np.inf, high: float = np.inf) -> Tensor:
    """Clip into [low, high]; gradient is zero where the clip is active."""
    inside = (a.data >= low) & (a.data <= high)
    return record_op("clamp", np.clip(a.data, low, high), (a,), lambda g: (g * inside,))


# Reductions


def _expand(g: np.ndarray, shape: Tuple[int, ...], axis: Optional[int], keepdims: bool) -> np.ndarray:
    if axis is not None and not keepdims:
        g = np.expand_dims(g, axis)
    return np.broadcast_to(g, shape).copy()


def sum(a: Tensor, axis: Optional[int] = None, keepdims: bool = False) -> Tensor:
    out = a.data.sum(axis=axis, keepdims=keepdims)
    return record_op("sum", out, (a,), lambda g: (_expand(g, a.shape, axis, keepdims),))


def mean(a: Tensor, axis: Optional[int] = None, keepdims: bool = False) -> Tensor:
    count = a.size if axis is None else a.shape[axis]
    out = a.data.mean(axis=axis, keepdims=keepdims)
    return record_op(
        "mean", out, (a,), lambda g: (_expand(g, a.shape, axis, keepdims) / count,)
    )


def log_softmax(a: Tensor, axis: int = -1) -> Tensor:
    lse = special.logsumexp(a.data, axis=axis, keepdims=True)
    out = a.data - lse
    soft = np.exp(out)
    return record_op(
        "log_softmax", out, (a,),
        lambda g: (g - soft * g.sum(axis=axis, keepdims=True),),
    )


# Normalization


def batch_norm(
    x: Tensor,
    gamma: Tensor,
    beta: Tensor,
    running_mean: np.ndarray,
    running_var: np.ndarray,
    training: bool,
    momentum: float = 0.9,
    eps: float = 1e-5,
) -> Tensor:
    """
    Batch normalization over axis 0 of a (n, f) input.

    Training mode normalizes with batch statistics and updates the running
    buffers in place as ``running = momentum * running + (1 - momentum) * batch``.
    Inference mode uses the running buffers.
    """
    if x.ndim != 2 or gamma.shape != (x.shape[1],) or beta.shape != (x.shape[1],):
        raise ShapeMismatchException("batch_norm", [x.shape, gamma.shape, beta.shape])

    if training:
        n = x.shape[0]
        mu = x.data.mean(axis=0)
        var = x.data.var(axis=0)
        inv_std = 1.0 / np.sqrt(var + eps)
        x_hat = (x.data - mu) * inv_std
        unbiased = var * n / (n - 1) if n > 1 else var
        running_mean *= momentum
        running_mean += (1.0 - momentum) * mu
        running_var *= momentum
        running_var += (1.0 - momentum) * unbiased

        def _backward(g: np.ndarray) -> Tuple[Optional[np.ndarray], ...]:
            d_hat = g * gamma.data
            gx = inv_std / n * (
                n * d_hat - d_hat.sum(axis=0) - x_hat * (d_hat * x_hat).sum(axis=0)
            )
            return gx, (g * x_hat).sum(axis=0), g.sum(axis=0)
    else:
        inv_std = 1.0 / np.sqrt(running_var + eps)
        x_hat = (x.data - running_mean) * inv_std

        def _backward(g: np.ndarray) -> Tuple[Optional[np.ndarray], ...]:
            return g * gamma.data * inv_std, (g * x_hat).sum(axis=0), g.sum(axis=0)

    out = gamma.data * x_hat + beta.data
    return record_op("batch_norm", out, (x, gamma, beta), _backward)
