"""Domain geometry: the roof curve h over [0, L] and its aspect ratio.

The flow domain is {(x, y): 0 < x < L, 0 < y < h(x)} with h(0) = h(L) = delta
and a single interior maximum H.  The aspect parameter is epsilon = H / L.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import (
    EndpointMismatch,
    MultipleCriticalPoints,
    NonPositiveLength,
    ValidationError,
)

_VALIDATION_SAMPLES = 2048
_ENDPOINT_RTOL = 1e-9


@dataclass(frozen=True)
class HeightCurve:
    """Validated roof function with its derived scales.

    ``h`` and ``hprime`` are callables on [0, L]; delta, H and epsilon are
    fixed at construction.  Instances are immutable and safe to share.
    """

    h: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    hprime: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    L: float
    delta: float
    H: float
    family: str = "parabolic"

    @property
    def epsilon(self) -> float:
        return self.H / self.L

    def __call__(self, x):
        return self.h(x)


def _validate(curve: HeightCurve) -> HeightCurve:
    if not np.isfinite(curve.L) or curve.L <= 0.0:
        raise NonPositiveLength(f"L = {curve.L}, must be > 0")
    x = np.linspace(0.0, curve.L, _VALIDATION_SAMPLES + 1)
    hx = np.asarray(curve.h(x), dtype=float)
    if np.any(hx <= 0.0) or not np.all(np.isfinite(hx)):
        raise MultipleCriticalPoints("h must be finite and strictly positive on [0, L]")
    h0, hL = float(hx[0]), float(hx[-1])
    scale = max(abs(h0), abs(hL), 1e-300)
    if abs(h0 - hL) > _ENDPOINT_RTOL * scale:
        raise EndpointMismatch(f"h(0) = {h0} but h(L) = {hL}")
    if abs(h0 - curve.delta) > _ENDPOINT_RTOL * scale:
        raise EndpointMismatch(f"h(0) = {h0} does not match delta = {curve.delta}")
    # Exactly one interior critical point, a maximum: the sampled slope must
    # change sign exactly once, from + to -.  C2 checking on arbitrary
    # closures is undecidable; sign sampling at this density is the contract.
    hp = np.asarray(curve.hprime(x[1:-1]), dtype=float)
    signs = np.sign(hp[np.abs(hp) > 1e-13 * scale / curve.L])
    if len(signs) == 0:
        raise MultipleCriticalPoints("curve is flat: no interior maximum")
    flips = np.nonzero(np.diff(signs) != 0.0)[0]
    if len(flips) != 1 or signs[0] <= 0 or signs[-1] >= 0:
        raise MultipleCriticalPoints(
            f"expected exactly one interior maximum, found {len(flips)} slope sign change(s)"
        )
    hmax = float(hx.max())
    if abs(hmax - curve.H) > 1e-6 * max(curve.H, 1e-300):
        raise MultipleCriticalPoints(f"max h = {hmax} does not match stated H = {curve.H}")
    return curve


def parabolic_curve(L: float, delta: float, H: float) -> HeightCurve:
    """h(x) = delta + 4 (H - delta) x (L - x) / L^2."""
    amp = 4.0 * (H - delta)

    def h(x):
        x = np.asarray(x, dtype=float)
        return delta + amp * x * (L - x) / L**2

    def hprime(x):
        x = np.asarray(x, dtype=float)
        return amp * (L - 2.0 * x) / L**2

    return _validate(HeightCurve(h=h, hprime=hprime, L=L, delta=delta, H=H, family="parabolic"))


def sine_curve(L: float, delta: float, H: float) -> HeightCurve:
    """h(x) = delta + (H - delta) sin(pi x / L)."""
    amp = H - delta

    def h(x):
        x = np.asarray(x, dtype=float)
        return delta + amp * np.sin(np.pi * x / L)

    def hprime(x):
        x = np.asarray(x, dtype=float)
        return amp * (np.pi / L) * np.cos(np.pi * x / L)

    return _validate(HeightCurve(h=h, hprime=hprime, L=L, delta=delta, H=H, family="sine"))


def sine_squared_curve(L: float, delta: float, H: float) -> HeightCurve:
    """h(x) = delta + (H - delta) sin^2(pi x / L).

    Unlike the parabolic and sine bumps this roof meets the lateral
    boundaries with zero slope, so its periodic extension has no corner;
    transform refinement studies use it when corner singularities would
    mask the convergence order.
    """
    amp = H - delta

    def h(x):
        x = np.asarray(x, dtype=float)
        return delta + amp * np.sin(np.pi * x / L) ** 2

    def hprime(x):
        x = np.asarray(x, dtype=float)
        return amp * (np.pi / L) * np.sin(2.0 * np.pi * x / L)

    return _validate(HeightCurve(h=h, hprime=hprime, L=L, delta=delta, H=H, family="sine2"))


def table_curve(x: Sequence[float], y: Sequence[float]) -> HeightCurve:
    """Cubic interpolation through sampled (x, h) pairs."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 1 or x.shape != y.shape or len(x) < 4:
        raise MultipleCriticalPoints("table curve needs >= 4 aligned samples")
    if x[0] != 0.0 or np.any(np.diff(x) <= 0.0):
        raise NonPositiveLength("table abscissae must be ascending and start at 0")
    spline = CubicSpline(x, y)
    deriv = spline.derivative()
    L = float(x[-1])
    delta = float(y[0])
    H = float(y.max())
    return _validate(HeightCurve(h=spline, hprime=deriv, L=L, delta=delta, H=H, family="table"))


def build_height_curve(descriptor: dict) -> HeightCurve:
    """Build and validate a roof curve from a descriptor mapping.

    Keys: ``family`` ("parabolic" | "sine" | "table"), ``L``, ``delta``,
    ``H`` for the analytic families, or ``x``/``y`` arrays for tables.
    """
    family = descriptor.get("family", "parabolic")
    if family == "parabolic":
        return parabolic_curve(descriptor["L"], descriptor["delta"], descriptor["H"])
    if family == "sine":
        return sine_curve(descriptor["L"], descriptor["delta"], descriptor["H"])
    if family == "table":
        return table_curve(descriptor["x"], descriptor["y"])
    raise ValidationError(f"unknown curve family {family!r}")
