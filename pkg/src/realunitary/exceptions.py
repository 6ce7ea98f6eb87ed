"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Operand shapes are incompatible."""


class ConvergenceError(RuntimeError):
    """A Jacobi iteration did not converge within its sweep budget."""

    def __init__(self, message, sweeps):
        super().__init__(f"{message} (after {sweeps} sweeps)")
        self.sweeps = sweeps


class StructureError(ValueError):
    """A real matrix does not have the [[A, -B], [B, A]] block structure."""

    def __init__(self, message, discrepancy):
        super().__init__(message)
        self.discrepancy = discrepancy


class NotOrthogonalError(ValueError):
    """Input does not come from the embedding of a unitary matrix."""


class RecoveryError(RuntimeError):
    """Recovery could not produce a complete unitary eigendecomposition.

    The partially filled report is attached so callers can still inspect
    the per-group ranks and tolerances that led to the failure.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
