"""Exception hierarchy.

Every error raised by the package derives from :class:`NeuMapError`, which is a
``ValueError`` so that callers doing generic input validation still catch it.
"""


class NeuMapError(ValueError):
    """Base class for all package errors."""


# graph construction
class NonSquareError(NeuMapError):
    pass


class NonFiniteError(NeuMapError):
    pass


class NegativeWeightError(NeuMapError):
    pass


class AsymmetricBeyondToleranceError(NeuMapError):
    pass


class IsolatedVertexError(NeuMapError):
    pass


class SelfLoopError(NeuMapError):
    pass


# partitions
class EmptyKeepError(NeuMapError):
    pass


class IndexOutOfRangeError(NeuMapError, IndexError):
    pass


class DuplicateIndexError(NeuMapError):
    pass


class DegenerateBoundaryWarning(UserWarning):
    """The kept set is the whole graph, so there is no boundary to reflect off."""


# kernels
class NonPositiveBandwidthError(NeuMapError):
    pass


class DegenerateCloudError(NeuMapError):
    pass


# spectral machinery
class SingularBoundaryDegreeError(NeuMapError):
    pass


class ZeroBoundaryDegreeError(NeuMapError):
    pass


class EigensolverFailure(NeuMapError, RuntimeError):
    pass


class DimensionTooLargeError(NeuMapError):
    pass


class NegativeEigenvalueFractionalTimeError(NeuMapError):
    pass


class NonIntegerTimeError(NeuMapError):
    pass


class RayleighViolation(NeuMapError, AssertionError):
    pass


# baselines
class EmptyLandmarksError(NeuMapError):
    pass


class DegenerateRowError(NeuMapError):
    pass


# landmark selection
class FractionOutOfRangeError(NeuMapError):
    pass


class StrideTooSmallError(NeuMapError):
    pass


class NoPointsMarkedError(NeuMapError):
    pass


class AllPointsMarkedError(NeuMapError):
    pass


# metrics
class TooFewPointsError(NeuMapError):
    pass


class LengthMismatchError(NeuMapError):
    pass


class ConstantRegressorError(NeuMapError):
    pass


# pipeline
class ConfigError(NeuMapError):
    pass


class MismatchedInputsError(NeuMapError):
    pass
