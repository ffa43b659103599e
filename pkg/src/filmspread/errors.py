"""Exception types shared across the solvers."""


class DomainError(ValueError):
    """A parameter is outside the mathematical domain of the operation."""


class SingularityError(DomainError):
    """The ODE right-hand side was evaluated at or past the interface (z <= 0)."""


class UnsupportedRegimeError(DomainError):
    """The requested expansion/analysis does not exist in this parameter regime."""


class StabilityError(DomainError):
    """An explicit time step exceeds the advertised stability bound."""


class SolverError(RuntimeError):
    """A solve failed; carries diagnostics for post-mortem."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class ConvergenceError(SolverError):
    """A continuation or iteration did not converge; diagnostics hold the trace."""


class ClassificationError(SolverError):
    """A trajectory end matched no asymptotic regime within the caps."""


class NumericError(RuntimeError):
    """Unexpected numerical failure (NaN state, step underflow outside an event)."""
