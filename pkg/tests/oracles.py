"""Independent oracles for the numerical kernels.

Everything here deliberately avoids the package's quadrature and inversion
code paths: brute-force midpoint sums, classic fourth-order Runge-Kutta
shooting, and arbitrary-precision arithmetic.
"""

from __future__ import annotations

import math

import numpy as np


def midpoint_g(u: float, i0: float, exponent: float, panels: int = 1_000_000) -> float:
    """Brute-force midpoint rule for int_0^u (1 - s^2/(2 i0))^exponent ds."""
    mids = (np.arange(panels) + 0.5) * (u / panels)
    return float(np.sum((1.0 - mids * mids / (2.0 * i0)) ** exponent) * (u / panels))


def rk4_shoot_profile(
    h: float,
    U: float,
    i0: float,
    exponent: float = 6.0 / 25.0,
    steps: int = 102_400,
) -> tuple[np.ndarray, np.ndarray]:
    """Shooting solution of u' = K (1 - u^2/(2 i0))^{-exponent} on [0, h].

    K is found by bisection on the roof condition u(h) = -U using a coarse
    RK4 integrator, then the returned trajectory uses the full step count.
    Completely independent of the quadrature-inversion solver.
    """

    def rhs(u: float, k: float) -> float:
        sigma = 1.0 - u * u / (2.0 * i0)
        if sigma <= 0.0:
            raise OverflowError  # shot left the validity range
        return k * sigma ** (-exponent)

    def integrate(k: float, n: int, keep: bool = False):
        dy = h / n
        u = 0.0
        out = [0.0] if keep else None
        try:
            for _ in range(n):
                k1 = rhs(u, k)
                k2 = rhs(u + 0.5 * dy * k1, k)
                k3 = rhs(u + 0.5 * dy * k2, k)
                k4 = rhs(u + dy * k3, k)
                u = u + (dy / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
                if keep:
                    out.append(u)
        except OverflowError:
            return -np.inf, None
        return (u, np.asarray(out)) if keep else (u, None)

    # u(h) decreases as K decreases; bracket K in [-U sigma^-e / h, 0].
    k_hi = 0.0
    k_lo = -1.25 * (U / h) * (1.0 - U * U / (2.0 * i0)) ** (-exponent)
    end_lo, _ = integrate(k_lo, 4000)
    if end_lo > -U:
        raise AssertionError("shooting bracket failed to straddle the roof value")
    for _ in range(200):
        k_mid = 0.5 * (k_lo + k_hi)
        end, _ = integrate(k_mid, 4000)
        if end > -U:
            k_hi = k_mid
        else:
            k_lo = k_mid
        if k_hi - k_lo <= abs(k_hi) * 1e-15 + 1e-300:
            break
    k = 0.5 * (k_lo + k_hi)
    _, traj = integrate(k, steps, keep=True)
    y = np.linspace(0.0, h, steps + 1)
    return y, traj


def polytropic_invariant(p: np.ndarray, T: np.ndarray, b: float) -> np.ndarray:
    """p^(1-b) T^b, constant for an adiabatic polytropic gas."""
    return p ** (1.0 - b) * T**b
