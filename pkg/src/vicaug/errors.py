"""Exception types shared across the package."""


class VicaugError(Exception):
    """Base class for all errors raised by this package."""


class EmptyInputError(VicaugError, ValueError):
    """An operation received a zero-length signal or sample count."""


class ShapeMismatchError(VicaugError, ValueError):
    """Operands disagree in length, dimension, or filter/signal sizing."""


class DegenerateSignalError(VicaugError, ValueError):
    """A signal has zero power where nonzero power is required."""


class ParameterError(VicaugError, ValueError):
    """A parameter is outside its valid range."""


class CalibrationError(VicaugError, ValueError):
    """A requested filter bandwidth cannot be realized within the support."""


class GeometryError(VicaugError, ValueError):
    """Source/microphone placement is infeasible for the room."""


class MaterialLookupError(VicaugError, KeyError):
    """A wall material name is not present in the registry."""


class WavFormatError(VicaugError, ValueError):
    """A WAV file is malformed or uses an unsupported encoding."""


class EvaluationError(VicaugError, RuntimeError):
    """An injected callback failed or returned non-finite values."""
