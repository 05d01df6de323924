"""Exception hierarchy shared by every module."""


class QuadRepError(Exception):
    """Base class; the CLI maps these to exit code 1."""


class FormError(QuadRepError, ValueError):
    pass


class NotSymmetric(FormError):
    pass


class OddDiagonal(FormError):
    pass


class NotPositiveDefinite(FormError):
    pass


class BudgetExceeded(QuadRepError):
    def __init__(self, budget, what="enumeration"):
        super().__init__(f"{what} exceeded node budget {budget}")
        self.budget = budget


class NotCoprime(QuadRepError, ValueError):
    pass


class PrecisionTooLow(QuadRepError):
    pass


class StabilizationFailure(QuadRepError):
    pass


class CutoffTooSmall(QuadRepError, ValueError):
    pass


class PointNotOnSphere(QuadRepError, ValueError):
    pass


class GenerationExhausted(QuadRepError):
    pass
