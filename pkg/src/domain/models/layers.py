"""
Neural network building blocks on top of the autodiff tensors.

Modules expose named parameters (tensors with requires_grad) and named
buffers (plain arrays such as batch-norm running statistics).
"""

from typing import Dict, Iterator, List, Sequence, Tuple

import numpy as np

from ..autodiff import Tensor, ops
from ..exceptions import ShapeMismatchException


def kaiming_uniform(rng: np.random.Generator, fan_in: int, fan_out: int) -> np.ndarray:
    """Kaiming-uniform weights for ReLU layers, bound sqrt(6 / fan_in)."""
    bound = np.sqrt(6.0 / fan_in)
    return rng.uniform(-bound, bound, size=(fan_in, fan_out))


class Module:
    """Base class with parameter/buffer bookkeeping and train/eval mode."""

    def __init__(self) -> None:
        self.training = True

    def children(self) -> Iterator[Tuple[str, "Module"]]:
        return iter(())

    def own_parameters(self) -> Iterator[Tuple[str, Tensor]]:
        return iter(())

    def own_buffers(self) -> Iterator[Tuple[str, np.ndarray]]:
        return iter(())

    def named_parameters(self, prefix: str = "") -> Iterator[Tuple[str, Tensor]]:
        for name, tensor in self.own_parameters():
            yield prefix + name, tensor
        for child_name, child in self.children():
            yield from child.named_parameters(f"{prefix}{child_name}.")

    def named_buffers(self, prefix: str = "") -> Iterator[Tuple[str, np.ndarray]]:
        for name, buffer in self.own_buffers():
            yield prefix + name, buffer
        for child_name, child in self.children():
            yield from child.named_buffers(f"{prefix}{child_name}.")

    def parameters(self) -> List[Tensor]:
        return [tensor for _, tensor in self.named_parameters()]

    def train(self, mode: bool = True) -> "Module":
        self.training = mode
        for _, child in self.children():
            child.train(mode)
        return self

    def eval(self) -> "Module":
        return self.train(False)

    def zero_grad(self) -> None:
        for tensor in self.parameters():
            tensor.grad = None

    def state_dict(self) -> Dict[str, np.ndarray]:
        state = {name: tensor.data.copy() for name, tensor in self.named_parameters()}
        state.update({name: buffer.copy() for name, buffer in self.named_buffers()})
        return state

    def load_state_dict(self, state: Dict[str, np.ndarray]) -> None:
        targets = dict(self.named_parameters())
        buffers = dict(self.named_buffers())
        for name, value in state.items():
            value = np.asarray(value, dtype=np.float64)
            target = targets[name].data if name in targets else buffers[name]
            if target.shape != value.shape:
                raise ShapeMismatchException(f"load_state_dict[{name}]", [target.shape, value.shape])
            target[...] = value


class Linear(Module):
    """Affine map x @ W + b with Kaiming-uniform W and zero b."""

    def __init__(self, in_features: int, out_features: int, rng: np.random.Generator) -> None:
        super().__init__()
        self.in_features = in_features
        self.out_features = out_features
        self.weight = Tensor(kaiming_uniform(rng, in_features, out_features), requires_grad=True, name="weight")
        self.bias = Tensor(np.zeros(out_features), requires_grad=True, name="bias")

    def own_parameters(self) -> Iterator[Tuple[str, Tensor]]:
        yield "weight", self.weight
        yield "bias", self.bias

    def __call__(self, x: Tensor) -> Tensor:
        if x.ndim != 2 or x.shape[1] != self.in_features:
            raise ShapeMismatchException("linear", [x.shape, self.weight.shape])
        return ops.matmul(x, self.weight) + self.bias


class BatchNorm1d(Module):
    """Batch normalization with running-statistics momentum 0.9 and eps 1e-5."""

    def __init__(self, features: int, momentum: float = 0.9, eps: float = 1e-5) -> None:
        super().__init__()
        self.momentum = momentum
        self.eps = eps
        self.gamma = Tensor(np.ones(features), requires_grad=True, name="gamma")
        self.beta = Tensor(np.zeros(features), requires_grad=True, name="beta")
        self.running_mean = np.zeros(features)
        self.running_var = np.ones(features)

    def own_parameters(self) -> Iterator[Tuple[str, Tensor]]:
        yield "gamma", self.gamma
        yield "beta", self.beta

    def own_buffers(self) -> Iterator[Tuple[str, np.ndarray]]:
        yield "running_mean", self.running_mean
        yield "running_var", self.running_var

    def __call__(self, x: Tensor) -> Tensor:
        return ops.batch_norm(
            x, self.gamma, self.beta, self.running_mean, self.running_var,
            training=self.training, momentum=self.momentum, eps=self.eps,
        )


class MLP(Module):
    """
    Multilayer perceptron: (Linear -> BatchNorm -> ReLU) per hidden layer,
    then a final Linear.

    Args:
        sizes: Layer widths from input to output, at least two entries.
        rng: Generator for weight initialization.
        batch_norm: Insert batch normalization after each hidden Linear.
    """

    def __init__(self, sizes: Sequence[int], rng: np.random.Generator, batch_norm: bool = True) -> None:
        super().__init__()
        if len(sizes) < 2:
            raise ShapeMismatchException("mlp", [tuple(sizes)])
        self.sizes = list(sizes)
        self.linears = [Linear(a, b, rng) for a, b in zip(sizes[:-1], sizes[1:])]
        self.norms = [BatchNorm1d(width) for width in sizes[1:-1]] if batch_norm else []

    @property
    def output_layer(self) -> Linear:
        return self.linears[-1]

    def children(self) -> Iterator[Tuple[str, Module]]:
        for i, layer in enumerate(self.linears):
            yield f"linear{i}", layer
        for i, norm in enumerate(self.norms):
            yield f"norm{i}", norm

    def __call__(self, x: Tensor) -> Tensor:
        h = x
        for i, layer in enumerate(self.linears[:-1]):
            h = layer(h)
            if self.norms:
                h = self.norms[i](h)
            h = ops.relu(h)
        return self.linears[-1](h)
