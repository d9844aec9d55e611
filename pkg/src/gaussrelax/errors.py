"""Exception hierarchy shared by all modules."""


class GaussRelaxError(Exception):
    """Base class for every error raised by the package."""


class InvalidDimensionError(GaussRelaxError, ValueError):
    """Matrix shape is not square, not even-dimensional, or mismatched."""


class UnphysicalStateError(GaussRelaxError, ValueError):
    """A covariance matrix or spectrum violates the uncertainty principle."""


class NotSymplecticError(GaussRelaxError, ValueError):
    """A matrix expected to be symplectic (or orthosymplectic) is not."""


class DomainError(GaussRelaxError, ValueError):
    """A scalar argument lies outside the domain of a formula."""


class WrongDirectionError(DomainError):
    """Heating formula used on a cooling channel, or vice versa."""


class ContractError(GaussRelaxError, ValueError):
    """Inputs violate an ordering or pairing contract (e.g. unsorted budgets)."""


class NumericalError(GaussRelaxError, ArithmeticError):
    """A decomposition failed to meet its accuracy guarantee.

    ``residual`` carries the offending residual when one is available.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
