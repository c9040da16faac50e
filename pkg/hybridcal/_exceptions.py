"""Exceptions raised by hybridcal."""


class HybridcalError(Exception):
    """Base class for all errors raised by hybridcal."""


class ModelError(HybridcalError, ValueError):
    """An input violates the physical receiver model."""


class DegeneratePlanError(ModelError):
    """Both load impedances are equal, so F carries no information on Z_A."""


class SingularMapError(ModelError):
    """A denominator of the impedance map or of the voltage divider vanishes."""


class UnboundedImpedanceError(ModelError):
    """F sits on the pole of the inverse map (Z_A would be infinite)."""


class TrainingError(ModelError):
    """Invalid training sequence parameters."""


class SingularPriorError(ModelError):
    """The channel covariance cannot be inverted on a path that needs it."""

    def __init__(self, message=None):
        if message is None:
            message = ('channel covariance is singular; use the slow_fading '
                       'method for fully correlated channels')
        super().__init__(message)


class UnidentifiableError(HybridcalError):
    """F cannot be identified because the first-half statistic vanishes.

    H_hat -- the channel estimate that is still available (zeros)
    """

    def __init__(self, message, H_hat=None):
        super().__init__(message)
        self.H_hat = H_hat


class SolverError(HybridcalError, ArithmeticError):
    """No start of the root finder converged.

    best_F        -- the iterate with the smallest residual
    best_residual -- its normalized residual |g(F)| / scale
    """

    def __init__(self, message, best_F=None, best_residual=None):
        super().__init__(message)
        self.best_F = best_F
        self.best_residual = best_residual


class ConfigError(HybridcalError, ValueError):
    """Malformed configuration. ``key`` names the offending entry."""

    def __init__(self, key, message):
        super().__init__('{}: {}'.format(key, message))
        self.key = key
