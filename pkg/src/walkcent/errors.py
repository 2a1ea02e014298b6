"""Exception hierarchy shared by all modules.

Every failure mode that callers are expected to handle maps to one of the
classes below.  The command line layer translates them to process exit
codes: :class:`ValidationError` to 3, :class:`ConvergenceError` and
:class:`TruncationError` to 4, and :class:`ResourceLimitError` to 5.
"""

from __future__ import annotations

__all__ = [
    "WalkcentError",
    "ValidationError",
    "ConvergenceError",
    "TruncationError",
    "ResourceLimitError",
]


class WalkcentError(Exception):
    """Base class for all library-specific errors."""


class ValidationError(WalkcentError, ValueError):
    """Invalid input: malformed graph data, bad parameters, bad files."""


class ConvergenceError(WalkcentError, RuntimeError):
    """An iterative method failed to reach its tolerance.

    Attributes
    ----------
    report : object or None
        The solve report (iterations, residual) at the point of failure,
        when the failing routine produces one.
    """

    def __init__(self, message: str, report: object | None = None):
        super().__init__(message)
        self.report = report


class TruncationError(WalkcentError, RuntimeError):
    """A simulated walk exceeded the step budget before absorbing.

    Attributes
    ----------
    truncated : int
        Number of trials that hit the step cap.
    trials : int
        Total number of trials attempted.
    """

    def __init__(self, message: str, truncated: int, trials: int):
        super().__init__(message)
        self.truncated = truncated
        self.trials = trials


class ResourceLimitError(WalkcentError, RuntimeError):
    """A size cap was exceeded (dense-solver cap, enumeration cap, ...)."""
