import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import polytropic_invariant
from thinlayer import ClosureSet, GasParameters, closure_table
from thinlayer.errors import OutOfValidityRange


def _sample_u(closures, n=10_000, seed=7, frac=0.98):
    rng = np.random.default_rng(seed)
    return rng.uniform(-frac, frac, n) * closures.validity_bound


def test_sigma_values(closures):
    assert closures.sigma(0.0) == 1.0
    i0 = closures.constants.i0
    assert closures.sigma(np.sqrt(i0)) == pytest.approx(0.5, rel=1e-15)
    assert closures.sigma(closures.gas.U) == pytest.approx(closures.constants.sigma0, rel=1e-15)


def test_temperature_anchors(closures):
    gas = closures.gas
    assert closures.temperature(gas.U) == pytest.approx(gas.T_h, rel=1e-15)
    assert closures.temperature(0.0) == pytest.approx(closures.constants.T0, rel=1e-15)


def test_temperature_two_forms_agree(closures):
    u = _sample_u(closures)
    direct = closures.temperature(u)
    via_sigma = closures.constants.T0 * closures.sigma(u)
    np.testing.assert_allclose(direct, via_sigma, rtol=1e-12)


def test_pressure_anchors(closures):
    gas, c = closures.gas, closures.constants
    assert closures.pressure(0.0) == gas.p0
    assert closures.pressure(gas.U) == pytest.approx(
        gas.p0 * c.sigma0**c.b_ratio, rel=1e-15
    )


def test_ideal_gas_identity(closures):
    u = _sample_u(closures)
    gap = closures.density(u) * closures.gas.R * closures.temperature(u) - closures.pressure(u)
    assert np.max(np.abs(gap / closures.pressure(u))) < 1e-12


def test_polytropic_invariant(closures):
    u = _sample_u(closures)
    inv = polytropic_invariant(closures.pressure(u), closures.temperature(u), closures.gas.b)
    spread = (inv.max() - inv.min()) / np.mean(inv)
    assert spread < 1e-10


def test_power_law_identity(closures):
    u = _sample_u(closures)
    lhs = closures.viscosity(u) / closures.gas.mu_h
    rhs = (closures.temperature(u) / closures.gas.T_h) ** closures.gas.power_law_exp
    np.testing.assert_allclose(lhs, rhs, rtol=1e-12)


def test_viscosity_free_stream_anchor(closures):
    assert closures.viscosity(closures.gas.U) == pytest.approx(closures.gas.mu_h, rel=1e-14)


def test_unit_prandtl(closures):
    u = _sample_u(closures, n=100)
    pr = closures.gas.c_p * closures.viscosity(u) / closures.thermal_conductivity(u)
    np.testing.assert_allclose(pr, 1.0, rtol=0, atol=0)


def test_total_energy_constant(closures):
    u = _sample_u(closures)
    e = closures.total_energy(u)
    assert np.max(np.abs(e - closures.constants.i0) / closures.constants.i0) <= 1e-14
    assert closures.total_energy(0.0) == pytest.approx(closures.constants.i0, rel=1e-15)
    assert closures.total_energy(closures.gas.U) == pytest.approx(closures.constants.i0, rel=1e-15)


def test_constant_pressure_density_matches_at_free_stream(closures):
    gas = closures.gas
    assert closures.density_constant_pressure(gas.U) == pytest.approx(
        closures.density(gas.U), rel=1e-14
    )


def test_density_wall_value(closures):
    gas, c = closures.gas, closures.constants
    assert closures.density(0.0) == pytest.approx(gas.p0 / (gas.R * c.T0), rel=1e-15)


def test_evenness_and_monotonicity(closures):
    u = np.linspace(0.0, 0.9, 200) * closures.validity_bound
    for fn in (closures.sigma, closures.temperature, closures.pressure, closures.viscosity):
        np.testing.assert_allclose(fn(u), fn(-u), rtol=1e-15)
        assert np.all(np.diff(fn(u)) < 0.0)
    rho_cp = closures.density_constant_pressure(u)
    np.testing.assert_allclose(rho_cp, closures.density_constant_pressure(-u), rtol=1e-15)
    assert np.all(np.diff(rho_cp) > 0.0)


def test_out_of_validity(closures):
    with pytest.raises(OutOfValidityRange):
        closures.sigma(closures.validity_bound)
    with pytest.raises(OutOfValidityRange):
        closures.pressure(np.array([0.0, -2.0 * closures.validity_bound]))


@settings(max_examples=50, deadline=None)
@given(frac=st.floats(min_value=-0.999, max_value=0.999))
def test_energy_is_constant_property(frac):
    closures = ClosureSet.from_gas(GasParameters())
    u = frac * closures.validity_bound
    e = closures.total_energy(u)
    assert abs(e - closures.constants.i0) <= 1e-12 * closures.constants.i0


def test_closure_table_shape_and_header(closures):
    table = closure_table(closures, 11)
    assert table.shape == (11, 8)
    assert table[0, 0] == -closures.gas.U
    assert table[-1, 0] == 0.0
    # E column constant
    np.testing.assert_allclose(table[:, 7], closures.constants.i0, rtol=1e-14)
