"""Finite-difference solver for the rescaled compressible momentum balance.

On the flattened grid (s, tau_hat = tau/h(s)) the stationary system is

    L^2 eps^2 rho (u u_s + W u_th) = (c3 / h^2) d_th( sigma^a u_th ),
    W = (v - u tau_hat h') / h,

with u = 0 at the wall, u = -U/L at the roof and periodicity in s.  The
nonlinearity is handled by Picard iteration: coefficients and the upwind
convection neighbours are frozen from the previous iterate, and each sweep
solves one tridiagonal system per column (diffusion and the tau-convection
implicit, which keeps the matrix diagonally dominant).

The vertical velocity is recovered from discrete continuity through the
column-flux potential M(s, th) = h int_0^th rho u; with the s-derivative
taken spectrally (periodic) or with one-sided stencils (non-periodic), the
pair (u, v) is exactly solenoidal for the matching staggered divergence.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .closures import ClosureSet
from .errors import GridMismatch, NonConvergence, ValidityViolation
from .grids import Field2D, Grid2D


@dataclass(frozen=True)
class SolverOptions:
    tolerance: float = 1e-10          # max-norm update tolerance
    max_iterations: int = 10_000
    relaxation: float = 0.7
    viscosity_exponent: float | None = None  # None -> gas power law (19/25)
    convection: bool = True


@dataclass(frozen=True)
class SolveReport:
    iterations: int
    final_update_norm: float
    continuity_residual_l2: float
    converged: bool


def thomas_batched(sub, diag, sup, rhs):
    """Solve batched tridiagonal systems along the last axis.

    sub[..., 0] and sup[..., -1] are ignored.  Plain Thomas elimination,
    vectorized over the leading axes; systems must be nonsingular.
    """
    sub = np.asarray(sub, dtype=float)
    diag = np.asarray(diag, dtype=float).copy()
    sup = np.asarray(sup, dtype=float)
    rhs = np.asarray(rhs, dtype=float).copy()
    m = diag.shape[-1]
    for j in range(1, m):
        w = sub[..., j] / diag[..., j - 1]
        diag[..., j] -= w * sup[..., j - 1]
        rhs[..., j] -= w * rhs[..., j - 1]
    x = np.empty_like(rhs)
    x[..., -1] = rhs[..., -1] / diag[..., -1]
    for j in range(m - 2, -1, -1):
        x[..., j] = (rhs[..., j] - sup[..., j] * x[..., j + 1]) / diag[..., j]
    return x


def d_s(values: np.ndarray, grid: Grid2D) -> np.ndarray:
    """Canonical s-derivative along axis 0.

    Spectral for periodic grids (exact for the trigonometric interpolant,
    which is what makes the recovered v exactly solenoidal and the flux
    one-form exactly closed); centered with one-sided edges otherwise.
    """
    if grid.periodic:
        n = grid.n_s
        k = 2.0 * np.pi * np.fft.rfftfreq(n, d=grid.ds)
        spec = np.fft.rfft(values, axis=0)
        spec *= 1j * k[:, None]
        if n % 2 == 0:
            spec[-1, :] = 0.0  # Nyquist mode has no odd-derivative partner
        return np.fft.irfft(spec, n=n, axis=0)
    out = np.empty_like(values)
    ds = grid.ds
    out[1:-1] = (values[2:] - values[:-2]) / (2.0 * ds)
    out[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * ds)
    out[-1] = (3.0 * values[-1] - 4.0 * values[-2] + values[-3]) / (2.0 * ds)
    return out


def _rho_eps(u_values: np.ndarray, closures: ClosureSet, L: float) -> np.ndarray:
    """Constant-pressure density evaluated at the physical velocity L u_eps."""
    return np.asarray(closures.density_constant_pressure(L * u_values), dtype=float)


def flux_potential(u_field: Field2D, closures: ClosureSet) -> np.ndarray:
    """M[i, j] = h_i * cumulative-trapezoid of (rho u) along the column."""
    grid = u_field.grid
    L = grid.scaling.L
    rho_u = _rho_eps(u_field.values, closures, L) * u_field.values
    a = grid.h_eps[:, None] * rho_u
    m = np.zeros_like(a)
    np.cumsum(0.5 * grid.dtau * (a[:, 1:] + a[:, :-1]), axis=1, out=m[:, 1:])
    return m


def recover_v(u_field: Field2D, closures: ClosureSet) -> Field2D:
    """Vertical velocity from discrete continuity, v = 0 at the wall.

    rho v = -d_s M + tau_hat h' rho u; the same M and d_s appear in
    continuity_residual, which therefore vanishes to rounding on the output.
    """
    grid = u_field.grid
    L = grid.scaling.L
    m = flux_potential(u_field, closures)
    w = -d_s(m, grid)
    rho = _rho_eps(u_field.values, closures, L)
    rho_u = rho * u_field.values
    rho_v = w + grid.tau_hat[None, :] * grid.hprime_eps[:, None] * rho_u
    return Field2D(grid=grid, values=rho_v / rho)


def continuity_residual(u_field: Field2D, v_field: Field2D, closures: ClosureSet) -> float:
    """Discrete L2 norm of div(rho u, rho v) on staggered cells.

    The stencil pairs the canonical d_s with the two-point vertical
    difference that inverts the trapezoid accumulation, so recovered
    fields score at rounding level while arbitrary fields do not.
    """
    u_field.same_grid(v_field)
    grid = u_field.grid
    L = grid.scaling.L
    rho = _rho_eps(u_field.values, closures, L)
    rho_u = rho * u_field.values
    a = grid.h_eps[:, None] * rho_u
    w = rho * v_field.values - grid.tau_hat[None, :] * grid.hprime_eps[:, None] * rho_u
    a_half = 0.5 * (a[:, 1:] + a[:, :-1])
    r = d_s(a_half, grid) + (w[:, 1:] - w[:, :-1]) / grid.dtau
    r /= grid.h_eps[:, None]
    weights = grid.h_eps[:, None] * grid.ds * grid.dtau
    return float(np.sqrt(np.sum(r**2 * weights)))


def transport_velocity(
    u_values: np.ndarray, v_values: np.ndarray, grid: Grid2D
) -> np.ndarray:
    """Contravariant vertical transport W = (v - u tau_hat h') / h."""
    metric = grid.tau_hat[None, :] * grid.hprime_eps[:, None]
    return (v_values - u_values * metric) / grid.h_eps[:, None]


def solve_adimensional(
    grid: Grid2D,
    closures: ClosureSet,
    opts: SolverOptions | None = None,
) -> tuple[Field2D, Field2D, SolveReport]:
    """Picard-iterate the momentum balance on the given grid.

    Returns (u_field, v_field, report); raises NonConvergence when the
    iteration budget is exhausted and ValidityViolation if any iterate
    reaches the closure speed limit.
    """
    opts = opts or SolverOptions()
    if grid.scaling is None:
        raise GridMismatch("grid carries no domain scaling")
    L, eps = grid.scaling.L, grid.scaling.eps
    gas, const = closures.gas, closures.constants
    a_exp = opts.viscosity_exponent
    if a_exp is None:
        a_exp = gas.power_law_exp

    n_s, n_t = grid.n_s, grid.n_t
    dt, ds = grid.dtau, grid.ds
    u_roof = -gas.U / L
    kappa = const.c3 / (grid.h_eps**2 * dt**2)  # per-station diffusion scale
    pref = L**2 * eps**2

    u = np.tile(u_roof * grid.tau_hat, (n_s, 1))  # linear initial iterate
    iterations = 0
    norm = np.inf
    converged = False
    while iterations < opts.max_iterations:
        iterations += 1
        u_phys = L * u
        if np.any(np.abs(u_phys) >= closures.validity_bound):
            raise ValidityViolation(
                f"iterate reached the validity bound after {iterations} sweeps"
            )
        sigma = 1.0 - u_phys**2 / (2.0 * const.i0)
        sigma_pow = sigma**a_exp
        sig_half = 0.5 * (sigma_pow[:, 1:] + sigma_pow[:, :-1])

        # Tridiagonal blocks for interior nodes j = 1 .. n_t-1.
        k = kappa[:, None]
        sub = k * sig_half[:, :-1]
        sup = k * sig_half[:, 1:]
        diag = -(sub + sup)
        rhs = np.zeros((n_s, n_t - 1))

        if opts.convection:
            rho = _rho_eps(u, closures, L)
            v = recover_v(Field2D(grid=grid, values=u), closures).values
            beta = pref * rho[:, 1:-1]
            w_vel = transport_velocity(u, v, grid)[:, 1:-1]
            wp = np.maximum(w_vel, 0.0) / dt
            wm = np.maximum(-w_vel, 0.0) / dt
            sub = sub + beta * wp
            sup = sup + beta * wm
            u_int = u[:, 1:-1]
            neighbour = np.where(
                u_int < 0.0,
                np.roll(u, -1, axis=0)[:, 1:-1],
                np.roll(u, 1, axis=0)[:, 1:-1],
            )
            diag = diag - beta * (wp + wm) - beta * np.abs(u_int) / ds
            rhs = rhs - beta * np.abs(u_int) * neighbour / ds

        # Fold Dirichlet rows into the right-hand side.
        rhs[:, -1] -= sup[:, -1] * u_roof
        new_int = thomas_batched(sub, diag, sup, rhs)
        u_new = u.copy()
        u_new[:, 1:-1] = (1.0 - opts.relaxation) * u[:, 1:-1] + opts.relaxation * new_int
        norm = float(np.max(np.abs(u_new - u)))
        u = u_new
        if norm <= opts.tolerance:
            converged = True
            break
    if not converged:
        raise NonConvergence(
            f"Picard stalled at update norm {norm:.3e} after {iterations} sweeps"
        )

    u_field = Field2D(grid=grid, values=u)
    v_field = recover_v(u_field, closures)
    resid = continuity_residual(u_field, v_field, closures)
    report = SolveReport(
        iterations=iterations,
        final_update_norm=norm,
        continuity_residual_l2=resid,
        converged=True,
    )
    return u_field, v_field, report


def momentum_residual(
    u_field: Field2D,
    v_field: Field2D,
    closures: ClosureSet,
    viscosity_exponent: float | None = None,
    convection: bool = True,
) -> float:
    """Centered-stencil L2 residual of the momentum equation.

    Independent of the solver's upwind discretization, so it measures
    genuine truncation error (first order in s for upwind solutions).
    """
    u_field.same_grid(v_field)
    grid = u_field.grid
    L, eps = grid.scaling.L, grid.scaling.eps
    const = closures.constants
    a_exp = viscosity_exponent
    if a_exp is None:
        a_exp = closures.gas.power_law_exp
    u, v = u_field.values, v_field.values
    dt = grid.dtau

    sigma = 1.0 - (L * u) ** 2 / (2.0 * const.i0)
    sig_half = 0.5 * (sigma[:, 1:] ** a_exp + sigma[:, :-1] ** a_exp)
    diff = (
        sig_half[:, 1:] * (u[:, 2:] - u[:, 1:-1])
        - sig_half[:, :-1] * (u[:, 1:-1] - u[:, :-2])
    ) / dt**2
    diff *= (const.c3 / grid.h_eps**2)[:, None]

    if convection:
        rho = _rho_eps(u, closures, L)
        w_vel = transport_velocity(u, v, grid)
        du_ds = d_s(u, grid)
        du_dt = np.empty_like(u)
        du_dt[:, 1:-1] = (u[:, 2:] - u[:, :-2]) / (2.0 * dt)
        du_dt[:, 0] = (u[:, 1] - u[:, 0]) / dt
        du_dt[:, -1] = (u[:, -1] - u[:, -2]) / dt
        conv = L**2 * eps**2 * rho * (u * du_ds + w_vel * du_dt)
        res = diff - conv[:, 1:-1]
    else:
        res = diff
    weights = (grid.h_eps[:, None] * grid.ds * dt)
    return float(np.sqrt(np.sum(res**2 * weights)))
