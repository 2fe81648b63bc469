import numpy as np
import pytest

from thinlayer import (
    ClosureSet,
    Field2D,
    GasParameters,
    SolverOptions,
    continuity_residual,
    momentum_residual,
    parabolic_curve,
    raw_grid,
    recover_v,
    rescale_domain,
    solve_adimensional,
)
from thinlayer.adim_solver import d_s, flux_potential, thomas_batched
from thinlayer.errors import NonConvergence


@pytest.fixture(scope="module")
def default_grid(closures):
    curve = parabolic_curve(1.0, 0.15, 0.2)
    return rescale_domain(curve, 32, 64)


def test_thomas_against_dense_solver():
    rng = np.random.default_rng(2)
    n, m = 5, 12
    sub = rng.uniform(0.1, 1.0, (n, m))
    sup = rng.uniform(0.1, 1.0, (n, m))
    diag = 4.0 + rng.uniform(0.0, 1.0, (n, m))
    rhs = rng.standard_normal((n, m))
    x = thomas_batched(sub, diag, sup, rhs)
    for k in range(n):
        full = np.diag(diag[k]) + np.diag(sub[k][1:], -1) + np.diag(sup[k][:-1], 1)
        np.testing.assert_allclose(x[k], np.linalg.solve(full, rhs[k]), rtol=1e-12)


def test_spectral_ds_exact_on_modes():
    grid = raw_grid(1.0, 32, 16, periodic=True)
    vals = np.sin(2 * np.pi * grid.s)[:, None] * np.ones(17)[None, :]
    got = d_s(vals, grid)
    want = 2 * np.pi * np.cos(2 * np.pi * grid.s)[:, None] * np.ones(17)[None, :]
    np.testing.assert_allclose(got, want, atol=1e-12)


def test_nonperiodic_ds_exact_on_linear():
    grid = raw_grid(1.0, 16, 8, periodic=False)
    vals = (3.0 * grid.s + 1.0)[:, None] * np.ones(9)[None, :]
    np.testing.assert_allclose(d_s(vals, grid), 3.0, rtol=1e-12)


def _solve_rho_u_target(closures, target):
    """Velocity whose mass flux rho(u) * u equals the target to rounding.

    Newton on F(u) = rho(u) u - target with rho = k / sigma(u), so that
    d rho / du = rho^2 u / (k i0).
    """
    k = closures.constants.c2 * closures.constants.sigma0**closures.constants.b_ratio
    u = target / closures.density_constant_pressure(0.0)
    for _ in range(40):
        rho = closures.density_constant_pressure(u)
        drho = rho**2 * u / (k * closures.constants.i0)
        u = u - (rho * u - target) / (rho + u * drho)
    return u


def test_recover_v_manufactured_antiderivative(weak_closures):
    # rho u = s tau on a flat non-periodic unit grid: rho v must be -tau^2/2.
    grid = raw_grid(1.0, 24, 48, periodic=False)
    s = grid.s[:, None]
    tau = grid.tau_hat[None, :]
    u_vals = _solve_rho_u_target(weak_closures, s * tau)
    u = Field2D(grid=grid, values=u_vals)
    v = recover_v(u, weak_closures)
    rho_v = weak_closures.density_constant_pressure(u_vals) * v.values
    np.testing.assert_allclose(rho_v, -(tau**2) / 2.0 * np.ones_like(u_vals), atol=1e-10)
    assert continuity_residual(u, v, weak_closures) <= 1e-10


def test_recover_v_zero_for_columnar_flat(closures):
    grid = raw_grid(0.8, 16, 32, periodic=True)
    u = Field2D(grid=grid, values=np.tile(-np.sin(grid.tau_hat), (16, 1)))
    v = recover_v(u, closures)
    assert np.max(np.abs(v.values)) == 0.0


def test_recovered_pair_is_discretely_solenoidal(closures, default_grid):
    u, v, report = solve_adimensional(default_grid, closures, SolverOptions())
    assert continuity_residual(u, v, closures) <= 1e-8
    assert report.continuity_residual_l2 <= 1e-8


def test_continuity_residual_positive_for_random_fields(closures, default_grid):
    rng = np.random.default_rng(9)
    u = Field2D(grid=default_grid, values=rng.standard_normal(default_grid.shape))
    v = Field2D(grid=default_grid, values=rng.standard_normal(default_grid.shape))
    assert continuity_residual(u, v, closures) > 1e-2


def test_zero_fields_zero_residual(closures, default_grid):
    z = Field2D(grid=default_grid, values=np.zeros(default_grid.shape))
    assert continuity_residual(z, z, closures) == 0.0


def test_zero_wind_solve():
    closures = ClosureSet.from_gas(GasParameters(U=0.0))
    grid = rescale_domain(parabolic_curve(1.0, 0.15, 0.2), 16, 32)
    u, v, report = solve_adimensional(grid, closures, SolverOptions())
    assert np.all(u.values == 0.0)
    assert np.all(v.values == 0.0)
    assert report.iterations == 1
    assert report.converged


def test_diagnostic_mode_exactly_linear(weak_closures):
    grid = rescale_domain(parabolic_curve(1.0, 0.15, 0.2), 32, 128)
    opts = SolverOptions(viscosity_exponent=0.0, convection=False)
    u, _, report = solve_adimensional(grid, weak_closures, opts)
    linear = -weak_closures.gas.U * grid.tau_hat
    assert np.max(np.abs(u.values - linear[None, :])) <= 1e-12
    assert report.converged


def test_boundary_values_exact(closures, default_grid):
    u, v, _ = solve_adimensional(default_grid, closures, SolverOptions())
    assert np.all(u.values[:, 0] == 0.0)
    assert np.all(u.values[:, -1] == -closures.gas.U)
    assert np.all(v.values[:, 0] == 0.0)


def test_solution_monotone_and_valid(closures, default_grid):
    u, _, _ = solve_adimensional(default_grid, closures, SolverOptions())
    assert np.all(np.diff(u.values, axis=1) < 0.0)
    sigma = 1.0 - u.values**2 / (2.0 * closures.constants.i0)
    assert np.all(sigma > 0.0) and np.all(sigma <= 1.0)


def test_nonconvergence_raises(closures, default_grid):
    with pytest.raises(NonConvergence):
        solve_adimensional(default_grid, closures, SolverOptions(max_iterations=2))


def test_momentum_residual_refines(closures):
    curve = parabolic_curve(1.0, 0.15, 0.2)
    res = []
    for ns, nt in [(16, 32), (32, 64), (64, 128)]:
        grid = rescale_domain(curve, ns, nt)
        u, v, _ = solve_adimensional(grid, closures, SolverOptions())
        res.append(momentum_residual(u, v, closures))
    # First order or better under simultaneous refinement.
    assert res[1] <= res[0] / 1.5
    assert res[2] <= res[1] / 1.5


def test_momentum_residual_zero_in_diagnostic_mode(weak_closures):
    grid = rescale_domain(parabolic_curve(1.0, 0.15, 0.2), 16, 32)
    opts = SolverOptions(viscosity_exponent=0.0, convection=False)
    u, v, _ = solve_adimensional(grid, weak_closures, opts)
    res = momentum_residual(u, v, weak_closures, viscosity_exponent=0.0, convection=False)
    assert res <= 1e-9
