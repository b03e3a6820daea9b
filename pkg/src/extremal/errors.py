"""Exception types shared across the package."""


class ExtremalError(Exception):
    """Base class for every error raised by this package."""


class CharTwo(ExtremalError, ValueError):
    pass


class MixedFields(ExtremalError, ValueError):
    pass


class DimensionMismatch(ExtremalError, ValueError):
    pass


class GraphError(ExtremalError, ValueError):
    """Malformed graph input: loops, duplicate edges, unknown vertices, disconnected."""


class NotFiniteType(ExtremalError, ValueError):
    pass


class NotAffineType(ExtremalError, ValueError):
    pass


class NotDynkin(ExtremalError, ValueError):
    pass


class DegreeCapExceeded(ExtremalError, RuntimeError):
    pass


class UnknownBasisElement(ExtremalError, KeyError):
    pass


class MissingParameter(ExtremalError, KeyError):
    pass


class MissingDeltaValue(ExtremalError, ValueError):
    pass


class NonBasisWeight(ExtremalError, ValueError):
    pass


class NotProportional(ExtremalError, ValueError):
    pass


class NotExtremal(ExtremalError, ValueError):
    pass


class BothZero(ExtremalError, ValueError):
    pass


class GenericityFailed(ExtremalError, RuntimeError):
    pass


class ConstraintUnsolvable(ExtremalError, ValueError):
    pass


class CertificateFailed(ExtremalError, RuntimeError):
    pass


class PreconditionViolated(ExtremalError, ValueError):
    pass
