"""Exception hierarchy shared across the package.

Exit-code mapping used by the CLI: input problems -> 2, nothing found
-> 3, inconclusive verdict -> 4, resource exhaustion -> 5.
"""

from __future__ import annotations


class LegsurgError(Exception):
    """Base class for all package errors."""


class InputError(LegsurgError):
    """Malformed file, invalid diagram, or bad operation arguments."""


class FrontSyntaxError(InputError):
    """Token-level problem in a front file; carries the line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"{message}{where}")


class FrontTopologyError(InputError):
    """Event word does not close up into a valid diagram."""


class ComponentCountError(InputError):
    """Operation requires a different number of link components."""


class RadiusError(InputError):
    """Lattice window radius below the stabilization bound."""


class StabilizationError(LegsurgError):
    """A truncated computation failed its stabilization re-check."""


class SearchBudgetError(LegsurgError):
    """Rewrite search exceeded its node budget."""
