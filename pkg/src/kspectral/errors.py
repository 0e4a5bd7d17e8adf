"""Exception taxonomy shared by the library and the command line tool.

The split mirrors the exit-code contract of the CLI: parameter misuse,
numerical failures, and malformed input files are distinguishable by type.
"""


class KspectralError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(KspectralError):
    """A parameter is outside its documented range or inconsistent."""


class ParseError(KspectralError):
    """An input file (CSV or PGM) is malformed or truncated."""


class CalibrationError(KspectralError):
    """Bandwidth calibration cannot reach the requested target."""


class DegenerateSpectrumError(KspectralError):
    """The spectrum carries no usable decay information."""


class VanishingSelfAffinityError(KspectralError):
    """A diagonal entry of the powered operator underflowed to zero."""


class NumericalError(KspectralError):
    """A numerical routine failed to converge or violated its contract."""
