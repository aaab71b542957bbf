"""Package-level exception types."""


class SolverError(Exception):
    """Base class for solver failures."""


class ClassBoundaryError(SolverError):
    """The payoff sits on the boundary of its coalition-selection class, so
    no positive variation bound exists."""


class ReplicationError(SolverError):
    """A related game could not be verified even after shrinking the scale."""


class NonConvergenceError(SolverError):
    """The iterative search failed and no fallback produced a valid point."""
