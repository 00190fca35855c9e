"""
Domain exceptions for the pllvi numerical core.

This module defines every error raised by the pure numerical layer
(tensors, distributions, models, objectives and statistics).
"""

from typing import Iterable, Sequence


class DomainException(Exception):
    """Base exception for all domain-related errors."""

    def __init__(self, message: str) -> None:
        """
        Initialize the domain exception.

        Args:
            message: Human-readable error message describing the issue.
        """
        self.message = message
        super().__init__(self.message)


class ShapeMismatchException(DomainException):
    """Raised when operand shapes are incompatible for an operation."""

    def __init__(self, op: str, shapes: Iterable[Sequence[int]]) -> None:
        """
        Initialize the shape mismatch exception.

        Args:
            op: Name of the operation that rejected its operands.
            shapes: The offending operand shapes.
        """
        self.op = op
        self.shapes = [tuple(shape) for shape in shapes]
        rendered = ", ".join(str(shape) for shape in self.shapes)
        super().__init__(f"Shape mismatch in '{op}': {rendered}")


class DomainViolationException(DomainException):
    """Raised when an argument lies outside the mathematical domain of an op."""

    def __init__(self, op: str, reason: str) -> None:
        """
        Initialize the domain violation exception.

        Args:
            op: Name of the operation.
            reason: What was violated (e.g. "argument must be strictly positive").
        """
        self.op = op
        self.reason = reason
        super().__init__(f"Domain error in '{op}': {reason}")


class NumericOverflowException(DomainException):
    """Raised when a forward op on finite inputs produced a non-finite value."""

    def __init__(self, op: str) -> None:
        """
        Initialize the overflow exception.

        Args:
            op: Name of the operation that overflowed.
        """
        self.op = op
        super().__init__(f"Non-finite result in '{op}' from finite inputs")


class NonFiniteGradientException(DomainException):
    """Raised when an optimizer receives a NaN or infinite gradient."""

    def __init__(self, parameter: str) -> None:
        """
        Initialize the non-finite gradient exception.

        Args:
            parameter: Name of the parameter whose gradient is not finite.
        """
        self.parameter = parameter
        super().__init__(f"Non-finite gradient for parameter '{parameter}'")


class InvalidParameterException(DomainException):
    """Raised when a scalar or vector argument violates its documented range."""

    def __init__(self, name: str, value: object, reason: str) -> None:
        """
        Initialize the invalid parameter exception.

        Args:
            name: Parameter name.
            value: The rejected value.
            reason: Why the value is rejected.
        """
        self.name = name
        self.value = value
        self.reason = reason
        super().__init__(f"Invalid {name}={value!r}: {reason}")


class InfeasibleBoundsException(DomainException):
    """Raised when prior bounds admit no point on the simplex."""

    def __init__(self, reason: str) -> None:
        """
        Initialize the infeasible bounds exception.

        Args:
            reason: Which feasibility condition failed.
        """
        self.reason = reason
        super().__init__(f"Infeasible prior bounds: {reason}")


class MissingSampleStateException(DomainException):
    """Raised when a sample gradient is requested without retained draws."""

    def __init__(self, reason: str) -> None:
        self.reason = reason
        super().__init__(f"Cannot differentiate sample: {reason}")


class MissingLabelsException(DomainException):
    """Raised when an operation needs hidden true labels that are absent."""

    def __init__(self, operation: str) -> None:
        """
        Initialize the missing labels exception.

        Args:
            operation: The operation that requires true labels.
        """
        self.operation = operation
        super().__init__(f"'{operation}' requires true labels, but the dataset has none")
