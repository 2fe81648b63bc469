import numpy as np
import pytest

from thinlayer import Field2D, parabolic_curve, raw_grid, rescale_domain
from thinlayer.errors import GridMismatch
from thinlayer.grids import l2_norm_scaling_check


@pytest.fixture(scope="module")
def curve():
    return parabolic_curve(L=1.0, delta=0.1, H=0.2)


def test_crest_maps_to_unit_height(curve):
    grid = rescale_domain(curve, 16, 16)
    assert grid.h_eps.max() == pytest.approx(1.0, rel=1e-12)
    scaling = grid.scaling
    s, tau = scaling.to_adimensional(0.5, 0.2)
    assert (s, tau) == (pytest.approx(0.5), pytest.approx(1.0))


def test_roundtrip_maps(curve):
    grid = rescale_domain(curve, 16, 16)
    scaling = grid.scaling
    rng = np.random.default_rng(5)
    x = rng.uniform(0.0, 1.0, 1000)
    y = rng.uniform(0.0, 0.1, 1000)
    s, tau = scaling.to_adimensional(x, y)
    x2, y2 = scaling.to_physical(s, tau)
    np.testing.assert_allclose(x2, x, atol=1e-14)
    np.testing.assert_allclose(y2, y, atol=1e-14)


def test_velocity_scalings(curve):
    scaling = rescale_domain(curve, 16, 16).scaling
    assert scaling.u_to_adimensional(3.0) == pytest.approx(3.0 / curve.L)
    assert scaling.v_to_adimensional(3.0) == pytest.approx(3.0 / (curve.L * curve.epsilon))
    assert scaling.U_eps_factor == pytest.approx(1.0 / curve.L)


def test_norm_scaling_identity():
    # || u ||^2 on the physical domain equals L^4 eps || u_eps ||^2.
    curve = parabolic_curve(L=2.0, delta=0.2, H=0.5)
    lhs, rhs = l2_norm_scaling_check(lambda x, y: np.sin(x) * (1.0 + y), curve)
    assert lhs == pytest.approx(rhs, rel=1e-10)


def test_grid_validation():
    with pytest.raises(ValueError):
        raw_grid(1.0, 2, 16)
    with pytest.raises(ValueError):
        raw_grid(1.0, 16, 4)
    with pytest.raises(ValueError):
        raw_grid(0.0, 16, 16)


def test_field_shape_checks(curve):
    grid = rescale_domain(curve, 8, 16)
    with pytest.raises(GridMismatch):
        Field2D(grid=grid, values=np.zeros((8, 16)))
    with pytest.raises(ValueError):
        Field2D(grid=grid, values=np.full(grid.shape, np.nan))


def test_same_grid(curve):
    g1 = rescale_domain(curve, 8, 16)
    g2 = rescale_domain(curve, 8, 32)
    f1 = Field2D(grid=g1, values=np.zeros(g1.shape))
    f2 = Field2D(grid=g2, values=np.zeros(g2.shape))
    with pytest.raises(GridMismatch):
        f1.same_grid(f2)
    f1.same_grid(Field2D(grid=g1, values=np.ones(g1.shape)))


def test_hprime_matches_analytic_away_from_seam(curve):
    grid = rescale_domain(curve, 64, 16)
    analytic = curve.hprime(grid.s * curve.L) / curve.epsilon
    np.testing.assert_allclose(grid.hprime_eps[1:-1], analytic[1:-1], rtol=1e-10, atol=1e-12)
