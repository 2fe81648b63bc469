"""Pointwise thermodynamic closures as functions of horizontal velocity.

All state variables collapse onto powers of sigma(u) = 1 - u^2/(2 i0):

    T   = T0 sigma                 (equivalently T_h + (U^2 - u^2)/(2 c_p))
    p   = p0 sigma^{b/(b-1)}
    rho = c2 sigma^{b/(b-1) - 1}           (ideal gas, exact)
    rho~= c2 sigma0^{b/(b-1)} / sigma      (constant-pressure variant)
    mu  = c3 sigma^{19/25}

Every function accepts scalars or arrays and raises OutOfValidityRange when
|u| reaches the speed limit sqrt(2 i0).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import sqrt

import numpy as np

from .errors import OutOfValidityRange
from .gas import DerivedConstants, GasParameters, derive_constants

#: Margin keeping sigma away from 0 (the rho closure carries a sigma^{-1}).
VALIDITY_MARGIN = 1e-9


@dataclass(frozen=True)
class ClosureSet:
    """Immutable bundle of gas inputs, derived constants and the closures."""

    gas: GasParameters
    constants: DerivedConstants
    margin: float = VALIDITY_MARGIN
    validity_bound: float = field(init=False)

    def __post_init__(self):
        bound = sqrt(2.0 * self.constants.i0) * (1.0 - self.margin)
        object.__setattr__(self, "validity_bound", bound)

    @classmethod
    def from_gas(cls, gas: GasParameters | None = None, margin: float = VALIDITY_MARGIN):
        gas = gas if gas is not None else GasParameters()
        return cls(gas=gas, constants=derive_constants(gas), margin=margin)

    def _check(self, u):
        u = np.asarray(u, dtype=float)
        if np.any(np.abs(u) >= self.validity_bound) or not np.all(np.isfinite(u)):
            worst = float(np.max(np.abs(u)))
            raise OutOfValidityRange(
                f"|u| = {worst} reaches the validity bound {self.validity_bound}"
            )
        return u

    def sigma(self, u):
        u = self._check(u)
        return 1.0 - u * u / (2.0 * self.constants.i0)

    def temperature(self, u):
        """T from the constant-energy balance, Kelvin."""
        u = self._check(u)
        g = self.gas
        return g.T_h + (g.U**2 - u * u) / (2.0 * g.c_p)

    def pressure(self, u):
        return self.constants.c1 * self.sigma(u) ** self.constants.b_ratio

    def density(self, u):
        """Ideal-gas density; equals p/(R T) identically."""
        return self.constants.c2 * self.sigma(u) ** (self.constants.b_ratio - 1.0)

    def density_constant_pressure(self, u):
        """Density under the constant-pressure approximation p = p(U)."""
        k = self.constants.c2 * self.constants.sigma0**self.constants.b_ratio
        return k / self.sigma(u)

    def viscosity(self, u):
        return self.constants.c3 * self.sigma(u) ** self.gas.power_law_exp

    def thermal_conductivity(self, u):
        """kappa = c_p mu, i.e. unit Prandtl number by construction."""
        return self.gas.c_p * self.viscosity(u)

    def total_energy(self, u):
        """c_p T + u^2/2; constant and equal to i0 for every valid u."""
        u = self._check(u)
        return self.gas.c_p * self.temperature(u) + u * u / 2.0


def closure_table(closures: ClosureSet, n: int) -> np.ndarray:
    """n-row table of (u, sigma, T, p, rho, rho_constp, mu, E).

    u spans the free-stream range [-U, 0] (or [0, 0] when U = 0); this is
    the payload of the ``closures --table`` CLI subcommand.
    """
    if n < 2:
        raise ValueError("table needs at least two rows")
    u = np.linspace(-closures.gas.U, 0.0, n)
    cols = [
        u,
        closures.sigma(u),
        closures.temperature(u),
        closures.pressure(u),
        closures.density(u),
        closures.density_constant_pressure(u),
        closures.viscosity(u),
        closures.total_energy(u),
    ]
    return np.column_stack(cols)


TABLE_HEADER = "u,sigma,T,p,rho,rho_constp,mu,E"
