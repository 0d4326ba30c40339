"""Exception hierarchy shared across the package.

Every domain failure derives from :class:`CascadeOptError`; the CLI maps those
to exit code 1 and the HTTP layer to structured 4xx responses.  Each error can
carry a ``step`` label naming the pipeline stage where it was raised.
"""
from __future__ import annotations


class CascadeOptError(Exception):
    """Base class for all domain errors."""

    def __init__(self, message: str, *, step: str | None = None):
        super().__init__(message)
        self.step = step

    def __str__(self) -> str:
        base = super().__str__()
        return f"[{self.step}] {base}" if self.step else base


class EmptyInput(CascadeOptError):
    pass


class DimensionMismatch(CascadeOptError):
    pass


class ParseError(CascadeOptError):
    pass


class InvalidSupport(CascadeOptError):
    pass


class InfeasibleRegion(CascadeOptError):
    pass


class AuxiliaryInfeasible(CascadeOptError):
    pass


class AuxiliaryUnboundedAfterRetries(CascadeOptError):
    pass


class UnboundedPolytope(CascadeOptError):
    pass


class EmptyPolytope(CascadeOptError):
    pass


class EmptyCompromiseSet(CascadeOptError):
    pass


class EmptySortingSet(CascadeOptError):
    pass


class AssumptionViolated(CascadeOptError):
    pass


class InvalidSortingIndex(CascadeOptError):
    pass


class NonPositiveSlack(CascadeOptError):
    pass


class DmBoundsViolation(CascadeOptError):
    """Raised when decision-maker slacks would leave the initial bound box.

    ``component`` is the 1-based variable index, ``side`` is ``"lower"`` or
    ``"upper"``, and ``excess`` says by how much the limit was crossed.
    """

    def __init__(self, message: str, *, component: int, side: str, excess, step: str | None = None):
        super().__init__(message, step=step)
        self.component = component
        self.side = side
        self.excess = excess


class PhaseError(CascadeOptError):
    """A session operation was called in a phase that does not admit it."""

    def __init__(self, message: str, *, phase: str, step: str | None = None):
        super().__init__(message, step=step)
        self.phase = phase
