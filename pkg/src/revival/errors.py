"""Exception types raised by the simulation modules."""


class RevivalError(Exception):
    """Base class for every error raised by this package."""


class NegativeParameter(RevivalError, ValueError):
    pass


class NonFinite(RevivalError, ValueError):
    pass


class MissingClassicalN(RevivalError, ValueError):
    pass


class CutoffTooSmall(RevivalError):
    pass


class InvalidGrid(RevivalError, ValueError):
    pass


class EmptyScan(RevivalError, ValueError):
    pass


class DegenerateScan(RevivalError, ValueError):
    pass


class TooFewSamples(RevivalError, ValueError):
    pass


class TooFewSteps(RevivalError, ValueError):
    pass


class SplitMismatch(RevivalError, ValueError):
    pass


class MissingGenerator(RevivalError, ValueError):
    """The phase model carries no Hamiltonian rate function to integrate."""


class QuadratureNonConvergence(RevivalError):
    pass
