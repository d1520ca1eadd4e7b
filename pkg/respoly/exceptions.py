class RespolyException(Exception):
    pass


class InvalidInputError(RespolyException, ValueError):
    """A set, point, degree or window the computation cannot accept."""


class NumericalError(RespolyException):
    pass


class SingularReferenceError(NumericalError):
    pass


class ExchangeError(NumericalError):
    pass


class ConvergenceError(NumericalError):
    """
    The exchange ran out of iterations or stalled above the rounding floor.
    `best` holds the iterate with the smallest levelling defect seen.
    """

    def __init__(self, message, best=None):
        super(ConvergenceError, self).__init__(message)
        self.best = best


class RootIsolationError(NumericalError):
    def __init__(self, message, diagnostic=None):
        super(RootIsolationError, self).__init__(message)
        self.diagnostic = diagnostic or {}


class QuadratureError(NumericalError):
    pass


class InvariantViolation(RespolyException):
    pass
