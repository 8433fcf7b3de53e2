"""Exception types shared across the package."""


class PathampError(Exception):
    """Base class for all pathamp errors."""


class SingularAction(PathampError):
    """Action matrix has a determinant that is zero within tolerance."""


class DimensionTooLarge(PathampError):
    """Brute-force quadrature requested above the supported dimension."""


class NonConvergent(PathampError):
    """Grid refinement moved the quadrature result beyond the allowed drift."""


class PoleAtEvaluation(PathampError):
    """Frequency kernel evaluated at (or too close to) one of its poles."""


class ResonantCoupling(PathampError):
    """Coupling coefficient requested at the resonance k_im^2 = (w0^2 m - k)^2."""


class UnstableMode(PathampError):
    """Coupling at least as strong as the diagonal stiffness; a normal mode
    frequency is zero or imaginary."""


class EquidistanceViolated(PathampError):
    """Source-to-slit phases differ, so the reduced two-path form is invalid."""


class ZeroMomentum(PathampError):
    """Distance inference requires a nonzero momentum transfer."""


class ConfigError(PathampError):
    """Scenario configuration failed validation; message names the field."""
