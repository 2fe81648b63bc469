"""Exception hierarchy for the thinlayer package.

Every error raised on purpose by the package derives from ThinlayerError,
so callers (and the CLI) can distinguish domain failures from bugs.
"""


class ThinlayerError(Exception):
    """Base class for all package errors."""


# --- geometry / parameters -------------------------------------------------

class NonPositiveLength(ThinlayerError):
    """Domain length L must be strictly positive."""


class EndpointMismatch(ThinlayerError):
    """Roof curve endpoints h(0) and h(L) disagree."""


class MultipleCriticalPoints(ThinlayerError):
    """Roof curve must have exactly one interior critical point (a maximum)."""


class NonPhysicalParameter(ThinlayerError):
    """A physical input (speed, temperature, viscosity, pressure, ...) is out of range."""


class InvalidPolytropicExponent(ThinlayerError):
    """Polytropic exponent b must exceed 1."""


# --- closures / validity ---------------------------------------------------

class OutOfValidityRange(ThinlayerError):
    """|u| reached the total-energy speed limit sqrt(2*i0)."""


class ValidityViolation(ThinlayerError):
    """A solve produced or was asked for velocities outside the validity range."""


# --- numerics --------------------------------------------------------------

class QuadratureNonConvergence(ThinlayerError):
    """Adaptive quadrature ran out of subdivisions before meeting tolerance."""


class BracketFailure(ThinlayerError):
    """Bisection bracket lost its sign change (internal invariant violation)."""


class GridTooCoarse(ThinlayerError):
    """Operation requires a finer grid than was supplied."""


class GridMismatch(ThinlayerError):
    """Fields defined on different grids were combined."""


class NonConvergence(ThinlayerError):
    """Picard iteration stagnated past the iteration budget."""


class DegenerateDensity(ThinlayerError):
    """Encountered a non-positive density while building the coordinate map."""


class PathDependence(ThinlayerError):
    """Streamfunction loop integral exceeded tolerance; input is not solenoidal."""


class StationMismatch(ThinlayerError):
    """Comparison profiles do not line up with the field's column stations."""


class SolveFailure(ThinlayerError):
    """A sweep member failed; carries the offending epsilon in the message."""


# --- configuration / IO ----------------------------------------------------

class ConfigError(ThinlayerError):
    """Base class for configuration problems (exit code 2 in the CLI)."""


class ParseError(ConfigError):
    """Config file is syntactically malformed."""


class ValidationError(ConfigError):
    """Config value failed validation; message names the field and range."""


class IoError(ThinlayerError):
    """File system failure (exit code 4 in the CLI)."""


class ApproximationWarning(UserWarning):
    """A hypothesis of the continuum theory (e.g. du/dx = 0) is materially
    violated by the supplied field; results are reported, not rejected."""
