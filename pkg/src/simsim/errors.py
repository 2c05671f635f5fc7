"""Exception hierarchy shared across the package."""


class SimsimError(Exception):
    """Base class for all errors raised by this package."""


class DegenerateInput(SimsimError):
    """Raised for empty or nonsensical sizes (n = 0, p = 0, bad modulus, ...)."""


class ShapeMismatch(SimsimError):
    """Raised when matrix or tuple shapes (or base fields) are incompatible."""


class SubsetShapeMismatch(ShapeMismatch):
    """Raised when minor index subsets are malformed or out of range."""


class DimensionMismatch(ShapeMismatch):
    """Raised when an identity check receives non-composable shapes."""


class WrongTupleLength(ShapeMismatch):
    """Raised when a reduction receives a tuple of the wrong length."""


class DegreeOverflow(SimsimError):
    """Raised when a polynomial exceeds the degree bound of a monomial basis."""


class SingularMatrix(SimsimError):
    """Raised when a matrix that must be invertible is singular."""


class SingularS(SingularMatrix):
    """Raised when a conjugating matrix supplied by the caller is singular."""


class NotMonic(SimsimError):
    """Raised when a polynomial that must be monic is not."""


class BadWordIndex(SimsimError):
    """Raised when a relation word references a tuple index outside [1, p]."""


class PartialBundle(SimsimError):
    """Raised when an operation needs a full invariant bundle but got a truncated one."""


class InfeasibleSize(SimsimError):
    """Raised when a full bundle exceeds the desk-scale cost bound and no cap was given."""


class FormatError(SimsimError):
    """Raised for malformed input files (matrix text, tuple JSON)."""
