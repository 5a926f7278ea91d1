"""Exception types raised across the package."""


class NCOUPError(Exception):
    """Base class for all errors raised by ncoup."""


class InputError(NCOUPError, ValueError):
    """Malformed or out-of-contract input."""


class NonHermitianInput(InputError):
    pass


class NotSymmetric(InputError):
    pass


class NotSkew(InputError):
    pass


class NotPositiveDefinite(InputError):
    pass


class SingularForm(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class InvalidParams(InputError):
    pass


class InvalidLambda(InputError):
    pass


class InvalidGain(InputError):
    pass


class InvalidRange(InputError):
    pass


class NegativeDiagonal(InputError):
    pass


class NegativeInput(InputError):
    pass


class NonLinearModel(InputError):
    pass


class NoConvergence(NCOUPError, ArithmeticError):
    """An iterative kernel ran out of its iteration budget."""


class NonFiniteResult(NCOUPError, ArithmeticError):
    pass
