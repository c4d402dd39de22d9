"""Exception hierarchy shared by every module."""


class MultiportError(Exception):
    """Base class for domain errors (CLI exit code 1)."""


class DimensionError(MultiportError, ValueError):
    pass


class NotUnitaryError(MultiportError, ValueError):
    pass


class NotHermitianError(MultiportError, ValueError):
    pass


class BranchCutError(MultiportError, ValueError):
    """An eigenphase sits on the -pi branch cut of the principal logarithm."""


class ResonanceError(MultiportError, ArithmeticError):
    """The internal feedback operator (I - S_II) is singular."""


class ScatterValidationError(MultiportError, ValueError):
    pass


class GridError(MultiportError, ValueError):
    """A quasi-momentum does not lie on the discrete grid 2*pi*n/N."""
