"""Exception hierarchy shared by all epsdense modules."""


class EpsdenseError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(EpsdenseError):
    pass


class ZeroVector(EpsdenseError):
    pass


class DegenerateInput(EpsdenseError):
    pass


class ConditionBViolated(EpsdenseError):
    """The reconstructed constant part disagrees; the input matrix cannot
    satisfy the span condition assumed by the decomposition."""


class BadEpsilon(EpsdenseError):
    pass


class NotInTranslate(EpsdenseError):
    pass


class ConditionViolated(EpsdenseError):
    """A search was refused because the input matrix fails one of the two
    dilation conditions."""


class DescentStalled(EpsdenseError):
    """A descent level produced fewer than two points to recurse on."""


class GcdViolation(EpsdenseError):
    pass


class PreconditionViolated(EpsdenseError):
    pass
