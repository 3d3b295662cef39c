"""Exception and warning types shared across the package."""


class OscbathError(Exception):
    """Base class for all package-specific errors."""


class FrequencyImaginary(OscbathError):
    """An effective frequency radicand is non-positive (overcritical coupling)."""


class InvalidModeCount(OscbathError):
    """Mode count below the two-mode minimum."""


class QuadratureFailure(OscbathError):
    """Adaptive quadrature did not reach the requested tolerance."""


class GridTooCoarse(OscbathError):
    """Coefficient-table grid spacing cannot resolve the kernel or oscillation scale."""


class TimeOutOfRange(OscbathError):
    """Requested time lies outside the coefficient table's grid."""


class StepTooLarge(OscbathError):
    """Integrator step exceeds the stability bound for the fastest oscillation."""


class BasisMismatch(OscbathError):
    """Covariance state is tagged with the wrong basis for this operation."""


class UnsupportedModeCount(OscbathError):
    """State family is only defined for two or three modes."""


class UnphysicalMoments(OscbathError):
    """Second moments violate the bound required for a real squeezing parameter."""


class WrongModeCount(OscbathError):
    """Operation defined for a fixed mode count only."""


class NoSignChange(OscbathError):
    """Bisection bracket does not straddle an entanglement sign change."""


class ConfigError(OscbathError):
    """Run configuration failed validation."""


class NonPhysicalWarning(UserWarning):
    """Trajectory violated the Heisenberg bound beyond integration-noise tolerance."""
