"""Exception hierarchy shared by all skewroute modules."""


class SkewRouteError(Exception):
    """Base class for all errors raised by this package."""


class EmptyScores(SkewRouteError):
    pass


class NonFiniteScore(SkewRouteError):
    pass


class NegativeScore(SkewRouteError):
    pass


class NonPositiveScore(SkewRouteError):
    pass


class TooFewScores(SkewRouteError):
    pass


class DegenerateDistribution(SkewRouteError):
    pass


class InvalidProbability(SkewRouteError):
    pass


class InvalidConfig(SkewRouteError):
    pass


class EmptyCalibrationSet(SkewRouteError):
    pass


class InvalidTargets(SkewRouteError):
    pass


class MissingLabel(SkewRouteError):
    pass


class LengthMismatch(SkewRouteError):
    pass


class OutOfRange(SkewRouteError):
    pass


class MissingSweepPoint(SkewRouteError):
    pass


class MissingArm(SkewRouteError):
    pass


class TooFewRecords(SkewRouteError):
    pass


class InvalidSpec(SkewRouteError):
    pass


class InconsistentArms(SkewRouteError):
    pass


class ParseError(SkewRouteError):
    """A corpus line that is not valid JSON. Carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class ValidationError(SkewRouteError):
    """A corpus line that parsed but failed validation. Carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
