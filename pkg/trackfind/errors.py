"""Error types raised by trackfind operations"""


class TrackFindError(Exception):
    """Base error carrying a human readable detail and a CLI exit code"""

    exit_code: int = 2
    default_detail: str = "track finding error"

    def __init__(self, detail: str | None = None):
        self.detail = detail or self.default_detail
        super().__init__(self.detail)


class UsageError(TrackFindError):
    exit_code = 1
    default_detail = "usage error"


class NoMethodsError(UsageError):
    default_detail = "no methods"


class DegenerateSegmentError(TrackFindError):
    default_detail = "degenerate segment"


class MissingTruthError(TrackFindError):
    default_detail = "no ground truth"


class InfeasibleInstanceError(TrackFindError):
    default_detail = "structurally infeasible instance"


class DimensionError(TrackFindError):
    default_detail = "dimension error"


class InstanceTooLargeError(TrackFindError):
    default_detail = "instance too large for exact search"


class DecodeError(TrackFindError):
    default_detail = "cannot decode infeasible assignment"


class RepairError(TrackFindError):
    default_detail = "repair failed"


class GeneratorError(TrackFindError):
    default_detail = "could not place tracks without collisions"


class SolveTimeoutError(TrackFindError):
    default_detail = "time limit exceeded"


class UndefinedGapError(TrackFindError):
    default_detail = "undefined gap"


class EmptyResultsError(TrackFindError):
    default_detail = "no result rows to plot"


class InstanceFormatError(TrackFindError):
    """Malformed or unsupported instance file"""

    default_detail = "malformed instance file"

    def __init__(self, detail: str | None = None, line: int | None = None):
        self.line = line
        if line is not None:
            detail = f"line {line}: {detail or self.default_detail}"
        super().__init__(detail)


class ModelBuildError(TrackFindError):
    default_detail = "inconsistent model terms"


class ResultsFormatError(TrackFindError):
    default_detail = "malformed results CSV"
