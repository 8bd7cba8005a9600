"""Exception hierarchy.

Every error raised by the package derives from :class:`SkeletError`.  The
four intermediate classes map onto the command line exit codes.
"""


class SkeletError(Exception):
    exit_code = 1


class ValidationError(SkeletError):
    exit_code = 2


class AssumptionError(SkeletError):
    exit_code = 3


class ResourceCapError(SkeletError):
    exit_code = 4


class InternalInvariantError(SkeletError):
    exit_code = 5


class NotSimplicial(ValidationError):
    pass


class GapOrOverlap(ValidationError):
    pass


class NotStarShaped(ValidationError):
    pass


class OriginMissing(ValidationError):
    pass


class PointOutsideSupport(ValidationError):
    pass


class PointOutsideCone(ValidationError):
    pass


class NotFullDimensional(ValidationError):
    pass


class DegenerateHeights(ValidationError):
    pass


class NotAFace(ValidationError):
    pass


class SimplexContainsOrigin(ValidationError):
    pass


class SignConditionViolated(ValidationError):
    pass


class SupportMismatch(ValidationError):
    pass


class CertificateMismatch(ValidationError):
    pass


class MissingHyperplane(ValidationError):
    pass


class DimensionTooHigh(ValidationError):
    pass


class NonRegularTriangulation(ValidationError):
    pass


class JobParseError(ValidationError):
    pass


class AssumptionViolation(AssumptionError):
    def __init__(self, index: int, message: str):
        super().__init__(f"assumption ({index}) violated: {message}")
        self.index = index


class DimensionCapExceeded(ResourceCapError):
    pass


class RankCapExceeded(ResourceCapError):
    pass


class CellularizationDidNotStabilize(ResourceCapError):
    pass


class NotAComplex(InternalInvariantError):
    pass


class NonCellularIdentification(InternalInvariantError):
    pass


class CensusMismatch(InternalInvariantError):
    pass
