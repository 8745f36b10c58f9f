"""Exception types raised by avekit."""


class AvekitError(Exception):
    """Base class for all avekit errors."""


class DimensionMismatch(AvekitError, ValueError):
    pass


class SingularMatrix(AvekitError, ArithmeticError):
    """A pivot fell below the scale-aware singularity threshold."""


class ConvergenceError(AvekitError, RuntimeError):
    """An iterative estimate did not converge within its iteration budget."""


class PreconditionViolation(AvekitError, ValueError):
    """A mathematical hypothesis (e.g. sigma_min(A) > 1) does not hold."""


class ConfigError(AvekitError, ValueError):
    pass
