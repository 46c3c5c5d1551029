"""Exception hierarchy shared by all modules."""


class OrbitopeError(ValueError):
    """Base class for every error raised by this package."""


class InvalidRank(OrbitopeError):
    pass


class DimensionError(OrbitopeError):
    pass


class OrbitTooLarge(OrbitopeError):
    pass


class NotFullDimensional(OrbitopeError):
    pass


class NotHermitian(OrbitopeError):
    pass


class NotSkewSymmetric(OrbitopeError):
    pass


class SizeCapExceeded(OrbitopeError):
    pass


class ShapeMismatch(OrbitopeError):
    pass


class SymmetryViolation(OrbitopeError):
    pass


class NotMaterialized(OrbitopeError):
    pass


class UnsupportedWeight(OrbitopeError):
    pass


class NotBiorbitope(OrbitopeError):
    pass


class SpecError(OrbitopeError):
    """Malformed spec or matrix input (JSON schema violations)."""
