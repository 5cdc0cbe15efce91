"""Exception types raised across the library."""


class VlcsecError(Exception):
    """Base class for all library errors."""


class InvalidParameterError(VlcsecError, ValueError):
    """A physical or algorithmic parameter is outside its valid domain."""


class DegenerateGeometryError(VlcsecError, ValueError):
    """Transmitter and receiver coincide, so angles are undefined."""


class InfeasibleScenarioError(VlcsecError, ValueError):
    """A scenario admits no valid LED assignment (e.g. a user reaches no LED)."""


class InfeasibleAssignmentError(VlcsecError, ValueError):
    """An assignment violates reachability or the one-LED-per-user rule."""


class EnumerationBudgetError(VlcsecError, RuntimeError):
    """Exhaustive search would exceed the configured evaluation budget."""
