"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class KirchhoffTrackError(Exception):
    exit_code = 1


class ConfigError(KirchhoffTrackError, ValueError):
    """Invalid configuration or arguments."""

    exit_code = 2


class IngestError(ConfigError):
    """A frame file does not match the array or the file format."""


class NumericError(KirchhoffTrackError, ArithmeticError):
    exit_code = 3


class DomainError(NumericError):
    """Argument outside the supported range of a special function."""


class SingularityError(NumericError):
    """Evaluation at a singular point (e.g. H0 at zero, field at its source)."""


class ShapeError(NumericError, ValueError):
    pass


class MetricError(NumericError):
    pass
