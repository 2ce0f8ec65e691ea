"""
Errors Module

This module defines the exception hierarchy shared by every polyion subpackage.
"""

from typing import Any, List, Optional, Sequence


class PolyionError(Exception):
    """Base class for all errors raised by polyion"""


class DomainError(PolyionError, ValueError):
    """An argument lies outside the domain of the operation"""


class ConfigError(PolyionError, ValueError):
    """A configuration is invalid or internally inconsistent"""


class ProtocolConfigError(ConfigError):
    """A measurement or preparation protocol cannot be built from the given states"""


class NumericError(PolyionError, ArithmeticError):
    """
    A numerical procedure failed to converge or became unstable

    Attributes:
        residual (float): The residual reached when the procedure stopped
    """

    def __init__(self, message: str, residual: Optional[float] = None):
        super().__init__(message)
        self.residual = residual


class AbortedTrajectoryError(NumericError):
    """A trajectory was stopped because its energy exceeded the stability bound"""


class SearchFailure(PolyionError):
    """
    An adaptive state search ran out of steps before isolating a single state

    Attributes:
        candidates (List[int]): State ids still compatible with the outcomes
        records (List[Any]): Measurement records collected before giving up
    """

    def __init__(self, message: str, candidates: Sequence[int], records: Sequence[Any]):
        super().__init__(message)
        self.candidates: List[int] = list(candidates)
        self.records: List[Any] = list(records)
