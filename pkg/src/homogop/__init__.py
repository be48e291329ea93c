"""Homogeneous multiplication operators M^(lambda, mu) on the unit disc."""

from .params import ParameterError, ParameterSet

__all__ = ["ParameterError", "ParameterSet"]
__version__ = "0.1.0"
