"""
Exception hierarchy
- every library error derives from WeylConesError
- the CLI maps them onto exit codes
"""


class WeylConesError(Exception):
    """Base class for library errors"""


class GeneralPositionError(WeylConesError):
    """Point configuration is not in general position"""


class ResourceBudgetError(WeylConesError):
    """Enumeration would exceed the configured budget"""


class UnsupportedFamilyError(WeylConesError, ValueError):
    """Formula or operation not defined for this family"""


class ParameterRangeError(WeylConesError, ValueError):
    """Argument outside the admissible range"""


class DimensionMismatchError(WeylConesError, ValueError):
    """Vector or matrix has the wrong ambient dimension"""


class ProjectionTieError(WeylConesError):
    """No face, or more than one face, passed the projection test"""


class SamplingError(WeylConesError):
    """Sampler gave up after its attempt limit"""


class VerificationMismatch(WeylConesError):
    """Enumerated value disagrees with its closed form"""
