"""Exception types shared across the package."""


class QchaosError(Exception):
    """Base class for all package-specific errors."""


class DegenerateAnisotropyError(QchaosError):
    """gamma == 1 makes sign(1 - gamma^2) vanish and the model coefficients degenerate."""


class NodalSingularityError(QchaosError):
    """Evaluation requested too close to a wavefunction node (pole of the velocity field)."""


class UnsupportedParametersError(QchaosError):
    """Hypergeometric series does not terminate for the given parameters."""


class UncontrollableSurfaceError(QchaosError):
    """C.K == 0: the sliding surface cannot be reached by the gain vector."""


class GridMismatchError(QchaosError):
    """Two trajectories do not share the same sampling grid."""


class UndefinedExponentError(QchaosError):
    """Series is degenerate (constant); a Lyapunov exponent is not defined."""


class ConfigError(QchaosError):
    """Scenario configuration is missing, unknown or out of range; names key and section."""
