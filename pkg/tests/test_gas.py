import mpmath
import pytest

from thinlayer.errors import InvalidPolytropicExponent, NonPhysicalParameter
from thinlayer.gas import GasParameters, derive_constants


def test_surface_temperature_at_measured_wind():
    # 4 m/s surface wind: T0 = 288.15 + 16/2008.
    c = derive_constants(GasParameters(U=4.0))
    assert c.T0 == pytest.approx(288.15 + 16.0 / 2008.0, rel=1e-15)
    assert c.T0 == pytest.approx(288.15796812749, rel=1e-12)


def test_total_energy_two_forms_agree(gas):
    c = derive_constants(gas)
    assert c.i0 == pytest.approx(gas.c_p * c.T0, rel=1e-15)
    assert c.i0 == pytest.approx(gas.c_p * gas.T_h + gas.U**2 / 2.0, rel=1e-15)


def test_zero_wind_limit():
    c = derive_constants(GasParameters(U=0.0))
    assert c.T0 == pytest.approx(288.15)
    assert c.sigma0 == 1.0


def test_sigma0_in_unit_interval(gas):
    c = derive_constants(gas)
    assert 0.0 < c.sigma0 < 1.0
    assert c.sigma0 == pytest.approx(gas.c_p * gas.T_h / c.i0, rel=1e-14)


def test_coefficients(gas):
    c = derive_constants(gas)
    assert c.c1 == gas.p0
    assert c.c2 == pytest.approx(gas.p0 / (gas.R * c.T0), rel=1e-15)
    assert c.c3 == pytest.approx(gas.mu_h * (c.T0 / gas.T_h) ** gas.power_law_exp, rel=1e-15)
    assert c.C_big == pytest.approx(c.c3 * c.c2**2 * c.sigma0 ** (2.0 * c.b_ratio), rel=1e-14)
    assert c.C_big > 0.0


def test_sigma_power_against_mpmath():
    # High-precision exponentiation oracle for the C coefficient's power.
    b = 1.405
    want = float(mpmath.power(mpmath.mpf("0.9"), mpmath.mpf(2 * b) / mpmath.mpf(b - 1)))
    got = 0.9 ** (2.0 * b / (b - 1.0))
    assert got == pytest.approx(want, rel=1e-14)


def test_determinism(gas):
    a = derive_constants(gas)
    b = derive_constants(GasParameters(**{f: getattr(gas, f) for f in (
        "U", "T_h", "mu_h", "c_p", "R", "b", "p0", "power_law_exp")}))
    assert a == b  # bit-identical fields


def test_invalid_polytropic_exponent():
    with pytest.raises(InvalidPolytropicExponent):
        derive_constants(GasParameters(b=0.9))
    with pytest.raises(InvalidPolytropicExponent):
        derive_constants(GasParameters(b=1.0))


@pytest.mark.parametrize("field,value", [
    ("T_h", -1.0), ("mu_h", 0.0), ("c_p", -3.0), ("R", 0.0), ("p0", -101325.0),
])
def test_nonphysical_parameters(field, value):
    with pytest.raises(NonPhysicalParameter):
        derive_constants(GasParameters(**{field: value}))
