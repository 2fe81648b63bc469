"""Structured grids on the rescaled domain and the rescaling maps.

The thin domain {0 < x < L, 0 < y < h(x)} maps to order-one coordinates by
(s, tau) = (x/L, y/(L eps)) with eps = H/L; velocities scale as u_eps = u/L,
v_eps = v/(L eps).  The solver grid flattens the curved roof with the column
coordinate tau_hat = tau / h_eps(s) in [0, 1]; station s = 1 is identified
with s = 0, so periodicity holds by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import GridMismatch
from .geometry import HeightCurve


@dataclass(frozen=True)
class DomainScaling:
    """Forward/inverse maps between the physical and rescaled domains."""

    L: float
    eps: float

    def to_adimensional(self, x, y):
        return np.asarray(x) / self.L, np.asarray(y) / (self.L * self.eps)

    def to_physical(self, s, tau):
        return np.asarray(s) * self.L, np.asarray(tau) * (self.L * self.eps)

    def u_to_adimensional(self, u):
        return np.asarray(u) / self.L

    def v_to_adimensional(self, v):
        return np.asarray(v) / (self.L * self.eps)

    @property
    def U_eps_factor(self) -> float:
        """u_eps = u / L; the roof condition is u_eps = -U/L."""
        return 1.0 / self.L


@dataclass(frozen=True, eq=False)
class Grid2D:
    """Tensor grid: n_s periodic stations x (n_t + 1) nodes per column.

    h_eps holds the rescaled roof h(Ls)/(L eps) per station and hprime_eps
    its periodic centered difference; using the same slope array everywhere
    keeps the discrete metric identities exact.
    """

    s: np.ndarray
    tau_hat: np.ndarray
    h_eps: np.ndarray
    hprime_eps: np.ndarray
    periodic: bool = True
    curve: HeightCurve | None = field(default=None, repr=False, compare=False)
    scaling: DomainScaling | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.n_s < 3 or self.n_t < 8:
            raise ValueError("need n_s >= 3 stations and n_t >= 8 intervals")
        if np.any(self.h_eps <= 0.0):
            raise ValueError("rescaled roof must be strictly positive")

    @property
    def n_s(self) -> int:
        return len(self.s)

    @property
    def n_t(self) -> int:
        return len(self.tau_hat) - 1

    @property
    def ds(self) -> float:
        return float(self.s[1] - self.s[0])

    @property
    def dtau(self) -> float:
        return float(self.tau_hat[1] - self.tau_hat[0])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_s, self.n_t + 1)

    def tau_levels(self) -> np.ndarray:
        """Physical-tau heights of every node, shape (n_s, n_t + 1)."""
        return self.h_eps[:, None] * self.tau_hat[None, :]


def _periodic_centered(values: np.ndarray, ds: float) -> np.ndarray:
    return (np.roll(values, -1) - np.roll(values, 1)) / (2.0 * ds)


def rescale_domain(curve: HeightCurve, n_s: int, n_t: int) -> Grid2D:
    """Build the solver grid for a validated roof curve.

    The maximum of h_eps is 1 by construction (H / (L eps) = 1); station 0
    sits at the periodic seam where the roof meets delta.
    """
    eps = curve.epsilon
    s = np.arange(n_s) / n_s
    tau_hat = np.linspace(0.0, 1.0, n_t + 1)
    h_eps = np.asarray(curve.h(s * curve.L), dtype=float) / (curve.L * eps)
    hprime = _periodic_centered(h_eps, 1.0 / n_s)
    return Grid2D(
        s=s,
        tau_hat=tau_hat,
        h_eps=h_eps,
        hprime_eps=hprime,
        periodic=True,
        curve=curve,
        scaling=DomainScaling(L=curve.L, eps=eps),
    )


def raw_grid(
    h_eps,
    n_s: int,
    n_t: int,
    periodic: bool = True,
    L: float = 1.0,
    eps: float = 1.0,
) -> Grid2D:
    """Grid over a prescribed rescaled roof; mainly for tests and transforms
    on rectangles (constant h_eps is allowed here, unlike HeightCurve)."""
    s = np.arange(n_s) / n_s
    tau_hat = np.linspace(0.0, 1.0, n_t + 1)
    h = np.broadcast_to(np.asarray(h_eps, dtype=float), (n_s,)).copy()
    if periodic:
        hp = _periodic_centered(h, 1.0 / n_s)
    else:
        hp = np.gradient(h, 1.0 / n_s)
    return Grid2D(
        s=s, tau_hat=tau_hat, h_eps=h, hprime_eps=hp,
        periodic=periodic, curve=None, scaling=DomainScaling(L=L, eps=eps),
    )


@dataclass(frozen=True)
class Field2D:
    """Scalar nodal field on a Grid2D; values shaped (n_s, n_t + 1)."""

    grid: Grid2D
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != self.grid.shape:
            raise GridMismatch(f"field shape {v.shape} != grid shape {self.grid.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("field values must be finite")
        object.__setattr__(self, "values", v)

    def same_grid(self, other: "Field2D") -> None:
        if self.grid is other.grid:
            return
        g, o = self.grid, other.grid
        if (
            g.shape != o.shape
            or not np.array_equal(g.h_eps, o.h_eps)
            or g.periodic != o.periodic
        ):
            raise GridMismatch("fields live on different grids")


def l2_norm_scaling_check(
    u_physical: Callable[[np.ndarray, np.ndarray], np.ndarray],
    curve: HeightCurve,
    n_s: int = 64,
    n_t: int = 64,
) -> tuple[float, float]:
    """Quadrature check of the norm identity ||u||^2_{phys} = L^4 eps ||u_eps||^2.

    Returns both sides evaluated with trapezoid sums on matched grids.
    """
    grid = rescale_domain(curve, n_s, n_t)
    scaling = grid.scaling
    tau = grid.tau_levels()
    s = grid.s[:, None]
    x, y = scaling.to_physical(np.broadcast_to(s, tau.shape), tau)
    u = np.asarray(u_physical(x, y), dtype=float)
    u_eps = scaling.u_to_adimensional(u)

    # Column-wise trapezoid in the vertical, uniform sum in the periodic s.
    def sq_norm(vals, vertical_scale):
        w = np.ones_like(grid.tau_hat)
        w[0] = w[-1] = 0.5
        col = (vals**2 * w[None, :]).sum(axis=1) * grid.dtau * vertical_scale
        return float(col.sum() * grid.ds)

    # Physical area element: dx dy = L * (L eps h_eps) ds dtau_hat.
    lhs = sq_norm(u, curve.L * curve.L * curve.epsilon * grid.h_eps)
    rhs_norm = sq_norm(u_eps, grid.h_eps)  # over Omega_eps: ds dtau = h dtau_hat
    return lhs, curve.L**4 * curve.epsilon * rhs_norm
