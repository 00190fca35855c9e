"""Numerically stable reductions."""

from typing import Optional, Union

import numpy as np

from ..autodiff import Tensor, as_tensor, ops
from ..exceptions import InvalidParameterException


def log_sum_exp(values: Union[Tensor, np.ndarray], axis: Optional[int] = None) -> Tensor:
    """
    log(sum(exp(values))) with a max shift.

    The shift is taken from the detached values; the gradient of the shifted
    form equals the gradient of the unshifted one.

    Args:
        values: Non-empty tensor.
        axis: Reduction axis, or None for all elements.

    Returns:
        Reduced tensor.

    Raises:
        InvalidParameterException: If values is empty.
    """
    values = as_tensor(values)
    if values.size == 0:
        raise InvalidParameterException("values", values.shape, "log_sum_exp needs at least one value")

    shift = values.data.max(axis=axis, keepdims=True)
    summed = ops.sum(ops.exp(values - shift), axis=axis)
    out_shift = shift.reshape(summed.shape) if axis is not None else float(shift.reshape(-1)[0])
    return ops.log(summed) + out_shift
