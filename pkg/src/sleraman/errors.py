"""Exception hierarchy shared across the package."""


class SleRamanError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(SleRamanError, ValueError):
    pass


class SingularMatrix(SleRamanError, ArithmeticError):
    """A pivot fell below the singularity floor during LU factorization."""


class SingularResolvent(SingularMatrix):
    """Resolvent evaluated on an undamped pole; add dephasing or an i*eps shift."""


class NoConvergence(SleRamanError, ArithmeticError):
    pass


class ToleranceNotMet(SleRamanError, ArithmeticError):
    """Adaptive quadrature hit its subdivision cap.

    The best available estimate and its error bound are attached so that
    callers can decide whether the result is still usable.
    """

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class InvalidRate(SleRamanError, ValueError):
    pass


class ParseError(SleRamanError, ValueError):
    def __init__(self, message, line=None, column=None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}")
        self.line = line
        self.column = column


class ValidationError(SleRamanError, ValueError):
    def __init__(self, key, constraint):
        super().__init__(f"{key}: {constraint}")
        self.key = key
        self.constraint = constraint


class NonFiniteResult(SleRamanError, ArithmeticError):
    """A spectrum value came out NaN or infinite."""

    def __init__(self, message, shift_cm=None, delay=None):
        super().__init__(message)
        self.shift_cm = shift_cm
        self.delay = delay
