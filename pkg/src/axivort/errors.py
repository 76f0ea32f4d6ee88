"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument is outside the mathematical domain of an operation."""


class AccuracyError(RuntimeError):
    """A numerical routine could not reach its target tolerance.

    Carries the best error estimate actually achieved.
    """

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class TableRangeError(ValueError):
    """A lookup argument falls outside a kernel table's tabulated range.

    Callers should widen the table or fall back to direct quadrature.
    """


class ConfigurationError(ValueError):
    """A run configuration is inconsistent or incomplete."""


class SingularityError(ValueError):
    """Unregularized kernel evaluated at a coincident source/target point."""


class HalfPlaneError(RuntimeError):
    """A particle left the closed upper half-plane by more than rounding.

    The continuum flow preserves {z > 0}; a genuine crossing means the
    time step is too large for the current state.
    """
