"""Exception hierarchy shared by every module."""


class CcdLabError(ValueError):
    """Base class for all input and numerical failures raised here."""


class DimensionError(CcdLabError):
    pass


class NotUnitaryError(CcdLabError):
    pass


class NotHermitianError(CcdLabError):
    pass


class NotInAlgebraError(CcdLabError):
    """Raised when a matrix is expected to lie in su(N) (or a subspace) and does not."""


class ParityError(CcdLabError):
    pass


class StructureError(CcdLabError):
    """A structured matrix lost its block structure beyond tolerance."""


class ConvergenceError(CcdLabError):
    pass


class PairingError(CcdLabError):
    """Odd-qubit spectrum points could not be matched into duplicate pairs."""


class PreconditionError(CcdLabError):
    pass
