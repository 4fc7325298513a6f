"""Exceptions raised by compmean.

Every class also derives from the builtin a caller would naturally catch, so ``except ValueError`` keeps working
for input problems and ``except RuntimeError`` for solver trouble.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from collections.abc import Sequence


class CompmeanError(Exception):
    """Base class for all compmean errors."""


class InvalidDimensionError(CompmeanError, ValueError):
    pass


class CompositionError(CompmeanError, ValueError):
    """Input rows are not valid compositions (negative parts, wrong sums, ragged or non-numeric data).

    ``problems`` lists each finding separately when the error comes from table validation.
    """

    def __init__(self, message: str, problems: Sequence[str] = ()) -> None:
        super().__init__(message)
        self.problems = tuple(problems) or (message,)


class SingularCovarianceError(CompmeanError, ValueError):
    pass


class CalibrationError(CompmeanError, ValueError):
    """The requested reference distribution is undefined for these samples."""


class ConvexHullError(CompmeanError, ValueError):
    """An empirical likelihood constraint cannot be met.

    ``sample_index`` is 1 or 2 when a candidate mean lies outside that sample's convex hull, and None when the
    two hulls do not intersect at all.
    """

    def __init__(self, message: str, sample_index: int | None = None) -> None:
        super().__init__(message)
        self.sample_index = sample_index


class ConvergenceError(CompmeanError, RuntimeError):
    def __init__(self, message: str, residual: float | None = None) -> None:
        super().__init__(message)
        self.residual = residual


class BootstrapError(CompmeanError, RuntimeError):
    """Too many bootstrap replicates could not be evaluated."""
