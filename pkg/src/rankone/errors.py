"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class RankOneError(Exception):
    """Base class for every error raised by this package."""


class ScheduleError(RankOneError, ValueError):
    """A schedule description breaks one or more rules.

    ``violations`` holds ``(path, message)`` pairs, one per broken rule.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(f"{path}: {msg}" for path, msg in self.violations))


class DepthError(RankOneError, IndexError):
    """A level beyond what the schedule defines was requested."""


class CapExceeded(RankOneError):
    """A computation would exceed a configured size cap."""


class InvalidBall(RankOneError, ValueError):
    """A ball address violates the digit or floor rules of its schedule."""
