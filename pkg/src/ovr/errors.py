"""Exception hierarchy shared by all modules."""


class OvrError(Exception):
    """Base class for library errors."""


class PositiveLossZeroProb(OvrError, ValueError):
    pass


class InvalidPMin(OvrError, ValueError):
    pass


class NegativeWeight(OvrError, ValueError):
    pass


class IndexOutOfRange(OvrError, IndexError):
    pass


class ZeroTotal(OvrError, ValueError):
    pass


class NonPositiveGamma(OvrError, ValueError):
    pass


class LossBoundViolated(OvrError, ValueError):
    pass


class InvalidTheta(OvrError, ValueError):
    pass


class NonPositiveBound(OvrError, ValueError):
    pass


class StaleTicket(OvrError, RuntimeError):
    """Raised when a ticket is reused or handed to the wrong sampler."""


class NegativeLoss(OvrError, ValueError):
    pass


class DimensionMismatch(OvrError, ValueError):
    pass


class NonObliviousAdversary(OvrError, ValueError):
    pass


class HorizonTooShort(OvrError, ValueError):
    pass


class OutOfRange(OvrError, ValueError):
    pass


class LemmaViolation(OvrError, AssertionError):
    """A quantity that is provably bounded exceeded its bound."""


class IoFailure(OvrError, OSError):
    pass


class NoLabels(OvrError, ValueError):
    pass


class TooFewPoints(OvrError, ValueError):
    pass


class ParseError(OvrError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class BadMix(OvrError, ValueError):
    pass


class ConfigError(OvrError, ValueError):
    """Usage problems detected while resolving a run configuration."""


class UnknownFlag(ConfigError):
    pass


class MissingRequired(ConfigError):
    pass


class ConflictingValues(ConfigError):
    pass
