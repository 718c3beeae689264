"""Exception types shared across the package."""


class HyperbolicError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(HyperbolicError, ValueError):
    """An argument lies outside the domain of the function."""


class ParameterError(HyperbolicError, ValueError):
    """A parameter combination is not admissible."""


class RangeError(HyperbolicError, OverflowError):
    """The result is not representable; use the log-space variant."""


class UndefinedMomentError(HyperbolicError, ValueError):
    """The requested moment does not exist for these parameters."""


class ConvolutionError(HyperbolicError, ValueError):
    """The operands do not share the parameters the convolution needs."""


class DegenerateSampleError(HyperbolicError, ValueError):
    """The sample is too small or has no spread."""


class ExistenceError(HyperbolicError, ValueError):
    """The maximum likelihood estimate does not exist.

    Attributes
    ----------
    verdict : ExistenceVerdict
        The classification that ruled the target out.
    """

    def __init__(self, message, verdict=None):
        super().__init__(message)
        self.verdict = verdict
