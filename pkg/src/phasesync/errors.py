"""Exception hierarchy shared across the package."""


class PhaseSyncError(Exception):
    pass


class ValidationError(PhaseSyncError, ValueError):
    """Bad input: wrong shape, non-Hermitian matrix, out-of-range parameter."""


class ConvergenceError(PhaseSyncError, RuntimeError):
    """An iterative solver hit its iteration cap.

    ``residual`` is the last relative residual, which is usually the
    symptom of a near-degenerate eigengap.
    """

    def __init__(self, message, residual=float("nan"), iterations=0):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class RecordParseError(ValidationError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
