"""Exception hierarchy shared by every dtrw module."""


class DTRWError(Exception):
    """Base class for all solver errors."""


class NonCommensurateDomain(DTRWError):
    pass


class TimeNotReachable(DTRWError):
    pass


class NonFiniteForce(DTRWError):
    pass


class StencilOutOfRange(DTRWError):
    pass


class ProbabilityOutOfRange(DTRWError):
    """A jump probability left [0, 1]; raised by the naive linear weight."""


class NegativeDirichletOnUnsplitRun(DTRWError):
    pass


class DegenerateGhost(DTRWError):
    """The exponential ghost formula is undefined for the given boundary value."""


class NonFiniteField(DTRWError):
    pass


class NonPositivePhi(DTRWError):
    pass


class LengthMismatch(DTRWError):
    pass


class DegenerateFit(DTRWError):
    pass


class ConfigInvalid(DTRWError):
    pass
