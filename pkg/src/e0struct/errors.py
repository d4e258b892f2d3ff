"""Exception hierarchy shared by the library and the command line front end."""


class E0Error(Exception):
    """Base class for domain errors; ``code`` is the short name reported by the CLI."""

    code = "E0Error"


class PrecisionError(E0Error, ArithmeticError):
    code = "PrecisionError"


class SingularCurveError(E0Error, ValueError):
    code = "SingularCurve"


class NotIntegralError(E0Error, ValueError):
    code = "NotIntegral"


class NotAdditiveError(E0Error, ValueError):
    code = "NotAdditive"


class NotNormalizedError(E0Error, ValueError):
    code = "NotNormalized"


class NotOnCurveError(E0Error, ValueError):
    code = "NotOnCurve"


class NotInE0Error(E0Error, ValueError):
    code = "NotInE0"


class TruncationError(E0Error, ValueError):
    code = "TruncationTooLow"


class NoTorsionError(E0Error):
    code = "NoTorsion"


class AmbiguousLiftError(E0Error, AssertionError):
    code = "AmbiguousLift"


class OracleInconsistencyError(E0Error, AssertionError):
    code = "OracleInconsistency"
