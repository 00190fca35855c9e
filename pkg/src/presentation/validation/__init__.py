"""
Validation layer for user input.

This module provides input validation for the presentation layer.
"""

from .input_validator import InputValidator, ValidationError

__all__ = ["InputValidator", "ValidationError"]
