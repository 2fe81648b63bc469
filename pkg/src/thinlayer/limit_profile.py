"""Per-column velocity profile from the reduced momentum balance.

In the thin-domain limit the horizontal velocity obeys f u'' = f' u' with
f = sigma^{-6/25}, which integrates once to u' = K f(u) and separates:

    G(u) := int_0^u sigma(s)^{6/25} ds = K y,     K = G(-U) / h.

G is odd and strictly increasing, so the profile is G^{-1} evaluated on a
linear ramp; the only iteration needed is a monotone bisection.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np

from .errors import BracketFailure, GridTooCoarse, OutOfValidityRange, ValidityViolation
from .gas import DerivedConstants
from .quadrature import adaptive_quadrature, fixed_panels

#: Exponent of sigma inside G; 6/25 = 1 - 19/25 ties it to the viscosity law.
LIMIT_EXPONENT = 6.0 / 25.0

_PANELS = 32
_BISECT_WIDTH = 1e-12


@dataclass(frozen=True)
class VelocityProfile:
    """Sampled u(y) on one vertical column.

    y_grid ascends from 0 to the column height; u_values carries the signed
    velocities (free stream is -U).  Light validation only, so tests may
    build perturbed profiles.
    """

    y_grid: np.ndarray
    u_values: np.ndarray
    column_x: float = 0.0

    def __post_init__(self):
        y = np.asarray(self.y_grid, dtype=float)
        u = np.asarray(self.u_values, dtype=float)
        if y.ndim != 1 or y.shape != u.shape or len(y) < 2:
            raise ValueError("y_grid and u_values must be aligned 1-D arrays")
        if y[0] != 0.0 or np.any(np.diff(y) <= 0.0):
            raise ValueError("y_grid must ascend from 0")
        if not (np.all(np.isfinite(y)) and np.all(np.isfinite(u))):
            raise ValueError("profile values must be finite")
        object.__setattr__(self, "y_grid", y)
        object.__setattr__(self, "u_values", u)

    @property
    def height(self) -> float:
        return float(self.y_grid[-1])

    @property
    def n(self) -> int:
        return len(self.y_grid) - 1


def g_integral(u: float, i0: float, exponent: float = LIMIT_EXPONENT) -> float:
    """G(u) = int_0^u (1 - s^2/(2 i0))^exponent ds by adaptive quadrature."""
    if exponent < 0.0:
        raise ValueError("exponent must be >= 0")
    bound = sqrt(2.0 * i0)
    if not abs(u) < bound:
        raise OutOfValidityRange(f"|u| = {abs(u)} >= sqrt(2 i0) = {bound}")
    if u == 0.0:
        return 0.0

    def integrand(s):
        return (1.0 - s * s / (2.0 * i0)) ** exponent

    return adaptive_quadrature(integrand, 0.0, u, abs_tol=1e-12)


def _g_values(u: np.ndarray, i0: float, exponent: float) -> np.ndarray:
    """Vectorized G on an array, exact identity in the exponent-0 mode."""
    u = np.asarray(u, dtype=float)
    if exponent == 0.0:
        return u.copy()
    bound = sqrt(2.0 * i0)
    x = u / bound

    def integrand(t):
        return (1.0 - t * t) ** exponent

    return bound * fixed_panels(integrand, x, _PANELS)


def solve_limit_profile(
    h: float,
    U: float,
    constants: DerivedConstants,
    n: int,
    exponent: float = LIMIT_EXPONENT,
    column_x: float = 0.0,
) -> VelocityProfile:
    """Solve the limit two-point problem on [0, h]: u(0) = 0, u(h) = -U.

    Interior nodes come from bisecting G(u) = K y_j on the bracket [-U, 0]
    to an interval width of 1e-12; endpoints are set exactly.  The profile
    shape depends only on y/h, never on h itself.
    """
    if h <= 0.0 or n < 2:
        raise ValueError("need h > 0 and n >= 2")
    bound = sqrt(2.0 * constants.i0)
    if not 0.0 <= U < bound:
        raise ValidityViolation(f"U = {U} must lie in [0, sqrt(2 i0) = {bound})")
    y = np.linspace(0.0, h, n + 1)
    if U == 0.0:
        return VelocityProfile(y_grid=y, u_values=np.zeros(n + 1), column_x=column_x)

    g_at_minus_u = float(_g_values(np.array([-U]), constants.i0, exponent)[0])
    targets = (np.arange(1, n) / n) * g_at_minus_u  # K * y_j with K = G(-U)/h

    lo = np.full(n - 1, -U)
    hi = np.zeros(n - 1)
    g_lo = np.full(n - 1, g_at_minus_u)
    g_hi = np.zeros(n - 1)
    if np.any((g_lo - targets) > 0.0) or np.any((g_hi - targets) < 0.0):
        raise BracketFailure("G is not monotone on the bracket")

    # Bisection carries the bracket down to ~1e-9 U unconditionally; the
    # safeguarded Newton polish (G' = sigma^exponent is analytic) then takes
    # the roots to rounding level, far inside the 1e-12 contract.  Machine
    # accuracy matters: finite-difference consistency checks of the profile
    # would otherwise drown in inversion noise.
    for _ in range(30):
        mid = 0.5 * (lo + hi)
        g_mid = _g_values(mid, constants.i0, exponent)
        take_left = g_mid >= targets  # root is below mid (G increasing)
        hi = np.where(take_left, mid, hi)
        lo = np.where(take_left, lo, mid)
    root = 0.5 * (lo + hi)
    for _ in range(3):
        g_root = _g_values(root, constants.i0, exponent)
        hi = np.where(g_root >= targets, root, hi)
        lo = np.where(g_root >= targets, lo, root)
        slope = (1.0 - root * root / (2.0 * constants.i0)) ** exponent
        step = root - (g_root - targets) / slope
        inside = (step >= lo) & (step <= hi)
        root = np.where(inside, step, 0.5 * (lo + hi))
    residual = np.abs(_g_values(root, constants.i0, exponent) - targets)
    if np.any(residual > _BISECT_WIDTH * max(U, 1.0)):
        raise BracketFailure("inversion residual failed to collapse")
    u = np.empty(n + 1)
    u[0] = 0.0
    u[-1] = -U
    u[1:-1] = root
    return VelocityProfile(y_grid=y, u_values=u, column_x=column_x)


@dataclass(frozen=True)
class ResidualReport:
    max_residual: float
    l2_residual: float
    n: int


def residual_check(
    profile: VelocityProfile,
    constants: DerivedConstants,
    exponent: float = LIMIT_EXPONENT,
) -> ResidualReport:
    """Centered-difference residual of f u'' - f' u' at interior nodes.

    Residuals are nondimensional: velocities scaled by the roof speed and
    heights by the column height, so tolerances are grid-size statements
    rather than unit-dependent ones.
    """
    n = profile.n
    if n < 16:
        raise GridTooCoarse(f"need n >= 16 interior resolution, got {n}")
    y = profile.y_grid
    dy = np.diff(y)
    if not np.allclose(dy, dy[0], rtol=1e-12, atol=0.0):
        raise GridTooCoarse("residual_check requires a uniform grid")
    u_ref = max(float(np.max(np.abs(profile.u_values))), 1e-300)
    u_hat = profile.u_values / u_ref
    d = 1.0 / n  # normalized spacing

    sigma = 1.0 - profile.u_values**2 / (2.0 * constants.i0)
    if np.any(sigma <= 0.0):
        raise OutOfValidityRange("profile leaves the validity range")
    f = sigma ** (-exponent)

    d2u = (u_hat[2:] - 2.0 * u_hat[1:-1] + u_hat[:-2]) / d**2
    du = (u_hat[2:] - u_hat[:-2]) / (2.0 * d)
    df = (f[2:] - f[:-2]) / (2.0 * d)
    res = f[1:-1] * d2u - df * du
    return ResidualReport(
        max_residual=float(np.max(np.abs(res))),
        l2_residual=float(np.sqrt(np.sum(res**2) * d)),
        n=n,
    )
