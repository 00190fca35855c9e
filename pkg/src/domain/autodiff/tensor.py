"""
Dense float64 tensor with a reverse-mode gradient tape.

Every op result remembers its parents and a backward closure. The tape for a
backward pass is the set of nodes reachable from the root, ordered by node
construction id, so a reverse sweep is a valid topological order.
"""

import itertools
import logging
import threading
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..exceptions import NumericOverflowException, ShapeMismatchException

logger = logging.getLogger(__name__)

ArrayLike = Union["Tensor", np.ndarray, float, int, Sequence[float]]
BackwardFn = Callable[[np.ndarray], Tuple[Optional[np.ndarray], ...]]

_node_ids = itertools.count()
_state = threading.local()


def is_grad_enabled() -> bool:
    """Return whether ops currently record onto the tape (per thread)."""
    return getattr(_state, "grad_enabled", True)


@contextmanager
def no_grad() -> Iterator[None]:
    """Disable tape recording inside the block."""
    previous = is_grad_enabled()
    _state.grad_enabled = False
    try:
        yield
    finally:
        _state.grad_enabled = previous


class Tensor:
    """
    Dense n-dimensional float64 array participating in the gradient tape.

    Attributes:
        data: Row-major float64 values.
        requires_grad: Whether gradients are tracked for this tensor.
        grad: Accumulated gradient (same shape as data) for leaves.
        name: Optional label used in gradient maps and error messages.
    """

    __array_ufunc__ = None

    def __init__(
        self,
        data: ArrayLike,
        requires_grad: bool = False,
        name: Optional[str] = None,
    ) -> None:
        if isinstance(data, Tensor):
            data = data.data
        self.data: np.ndarray = np.array(data, dtype=np.float64)
        self.requires_grad = bool(requires_grad)
        self.grad: Optional[np.ndarray] = None
        self.name = name
        self.op = "leaf"
        self._parents: Tuple["Tensor", ...] = ()
        self._backward_fn: Optional[BackwardFn] = None
        self._node_id = next(_node_ids)

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.data.shape

    @property
    def ndim(self) -> int:
        return self.data.ndim

    @property
    def size(self) -> int:
        return int(self.data.size)

    @property
    def is_leaf(self) -> bool:
        return self._backward_fn is None

    @property
    def T(self) -> "Tensor":
        return ops.transpose(self)

    def item(self) -> float:
        return float(self.data.reshape(-1)[0]) if self.size == 1 else float(self.data)

    def numpy(self) -> np.ndarray:
        return self.data.copy()

    def detach(self) -> "Tensor":
        return Tensor(self.data, requires_grad=False)

    def zero_grad(self) -> None:
        self.grad = None

    def sum(self, axis: Optional[int] = None, keepdims: bool = False) -> "Tensor":
        return ops.sum(self, axis=axis, keepdims=keepdims)

    def mean(self, axis: Optional[int] = None, keepdims: bool = False) -> "Tensor":
        return ops.mean(self, axis=axis, keepdims=keepdims)

    def reshape(self, *shape: int) -> "Tensor":
        if len(shape) == 1 and isinstance(shape[0], (tuple, list)):
            shape = tuple(shape[0])
        return ops.reshape(self, shape)

    def backward(self) -> "GradientMap":
        return backward(self)

    def __add__(self, other: ArrayLike) -> "Tensor":
        return ops.add(self, other)

    def __radd__(self, other: ArrayLike) -> "Tensor":
        return ops.add(other, self)

    def __sub__(self, other: ArrayLike) -> "Tensor":
        return ops.sub(self, other)

    def __rsub__(self, other: ArrayLike) -> "Tensor":
        return ops.sub(other, self)

    def __mul__(self, other: ArrayLike) -> "Tensor":
        return ops.mul(self, other)

    def __rmul__(self, other: ArrayLike) -> "Tensor":
        return ops.mul(other, self)

    def __truediv__(self, other: ArrayLike) -> "Tensor":
        return ops.div(self, other)

    def __rtruediv__(self, other: ArrayLike) -> "Tensor":
        return ops.div(other, self)

    def __neg__(self) -> "Tensor":
        return ops.neg(self)

    def __matmul__(self, other: "Tensor") -> "Tensor":
        return ops.matmul(self, other)

    def __getitem__(self, index: object) -> "Tensor":
        return ops.slice(self, index)

    def __repr__(self) -> str:
        grad = ", requires_grad=True" if self.requires_grad else ""
        label = f", name='{self.name}'" if self.name else ""
        return f"Tensor(shape={self.shape}, op='{self.op}'{grad}{label})"


def as_tensor(value: ArrayLike) -> Tensor:
    """Wrap constants; tensors pass through unchanged."""
    return value if isinstance(value, Tensor) else Tensor(value)


def record_op(
    op: str,
    data: np.ndarray,
    parents: Sequence[Tensor],
    backward_fn: BackwardFn,
    saturating: bool = False,
) -> Tensor:
    """
    Create the output tensor of an op and link it into the tape.

    Args:
        op: Op name (used in errors and tape inspection).
        data: Forward result.
        parents: Input tensors in the order backward_fn returns gradients.
        backward_fn: Maps the output gradient to one gradient per parent.
        saturating: Skip the finiteness check (op contract allows saturation).

    Returns:
        The output Tensor, recorded when any parent requires grad.

    Raises:
        NumericOverflowException: If finite inputs produced non-finite values.
    """
    data = np.asarray(data, dtype=np.float64)
    if not saturating and not np.all(np.isfinite(data)):
        if all(np.all(np.isfinite(p.data)) for p in parents):
            raise NumericOverflowException(op)

    out = Tensor.__new__(Tensor)
    out.data = data
    out.grad = None
    out.name = None
    out.op = op
    out._node_id = next(_node_ids)
    out._parents = ()
    out._backward_fn = None
    out.requires_grad = False

    if is_grad_enabled() and any(p.requires_grad for p in parents):
        out.requires_grad = True
        out._parents = tuple(parents)
        out._backward_fn = backward_fn
    return out


@dataclass
class GradientMap:
    """
    Result of a backward pass.

    Attributes:
        gradients: Leaf tensor -> gradient contributed by this pass.
        status: "ok", or "detached" when the root does not depend on any leaf.
    """

    gradients: Dict[Tensor, np.ndarray] = field(default_factory=dict)
    status: str = "ok"

    def __getitem__(self, tensor: Tensor) -> np.ndarray:
        return self.gradients[tensor]

    def __contains__(self, tensor: object) -> bool:
        return tensor in self.gradients

    def __len__(self) -> int:
        return len(self.gradients)


class GradTape:
    """
    Ordered record of the op nodes that lead to a root.

    Nodes are sorted by construction id, which is a topological order
    because an op can only consume tensors that already exist.
    """

    def __init__(self, nodes: List[Tensor]) -> None:
        self.nodes = nodes

    @classmethod
    def collect(cls, root: Tensor) -> "GradTape":
        seen = {id(root)}
        stack = [root]
        nodes: List[Tensor] = []
        while stack:
            node = stack.pop()
            if node._backward_fn is None:
                continue
            nodes.append(node)
            for parent in node._parents:
                if id(parent) not in seen and parent.requires_grad:
                    seen.add(id(parent))
                    stack.append(parent)
        nodes.sort(key=lambda t: t._node_id)
        return cls(nodes)

    def clear(self) -> None:
        for node in self.nodes:
            node._parents = ()
            node._backward_fn = None
        self.nodes = []


def backward(root: Tensor) -> GradientMap:
    """
    Propagate d(root)/d(leaf) to every requires_grad leaf.

    Leaves accumulate into ``.grad``; the returned map holds this pass's
    contribution. The tape is cleared afterwards.

    Args:
        root: Scalar tensor.

    Returns:
        GradientMap, with status "detached" if root has no tracked inputs.

    Raises:
        ShapeMismatchException: If root is not a scalar.
    """
    if root.size != 1:
        raise ShapeMismatchException("backward", [root.shape])

    if not root.requires_grad:
        logger.warning("backward called on a detached root; no gradients produced")
        return GradientMap(status="detached")

    seed = np.ones_like(root.data)
    leaf_grads: Dict[Tensor, np.ndarray] = {}

    if root.is_leaf:
        leaf_grads[root] = seed
    else:
        tape = GradTape.collect(root)
        pending: Dict[int, np.ndarray] = {id(root): seed}
        for node in reversed(tape.nodes):
            grad = pending.pop(id(node), None)
            if grad is None:
                continue
            parent_grads = node._backward_fn(grad)  # type: ignore[misc]
            for parent, parent_grad in zip(node._parents, parent_grads):
                if parent_grad is None or not parent.requires_grad:
                    continue
                if parent.is_leaf:
                    if parent in leaf_grads:
                        leaf_grads[parent] = leaf_grads[parent] + parent_grad
                    else:
                        leaf_grads[parent] = parent_grad
                elif id(parent) in pending:
                    pending[id(parent)] = pending[id(parent)] + parent_grad
                else:
                    pending[id(parent)] = parent_grad
        tape.clear()

    for leaf, grad in leaf_grads.items():
        grad = np.reshape(grad, leaf.shape)
        leaf_grads[leaf] = grad
        leaf.grad = grad.copy() if leaf.grad is None else leaf.grad + grad

    return GradientMap(gradients=leaf_grads)


from . import ops  # noqa: E402
