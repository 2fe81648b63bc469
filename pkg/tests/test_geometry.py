import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thinlayer.errors import EndpointMismatch, MultipleCriticalPoints, NonPositiveLength
from thinlayer.geometry import (
    build_height_curve,
    parabolic_curve,
    sine_curve,
    sine_squared_curve,
    table_curve,
)


def test_parabolic_epsilon():
    curve = parabolic_curve(L=1.0, delta=0.1, H=0.2)
    assert curve.epsilon == pytest.approx(0.2)
    assert curve.h(0.0) == pytest.approx(0.1)
    assert curve.h(1.0) == pytest.approx(0.1)
    assert curve.h(0.5) == pytest.approx(0.2)


def test_sine_epsilon():
    curve = sine_curve(L=2.0, delta=0.05, H=0.15)
    assert curve.epsilon == pytest.approx(0.075)


def test_constant_curve_rejected():
    with pytest.raises(MultipleCriticalPoints):
        build_height_curve({"family": "table", "x": np.linspace(0, 1, 9),
                            "y": np.full(9, 0.1)})


def test_two_bump_table_rejected():
    x = np.linspace(0.0, 1.0, 201)
    y = 0.1 + 0.05 * np.sin(2.0 * np.pi * x) ** 2  # two interior maxima
    with pytest.raises(MultipleCriticalPoints):
        table_curve(x, y)


def test_endpoint_mismatch():
    x = np.linspace(0.0, 1.0, 51)
    y = 0.1 + 0.2 * x * (1.2 - x)  # h(1) != h(0)
    with pytest.raises(EndpointMismatch):
        table_curve(x, y)


def test_nonpositive_length():
    with pytest.raises(NonPositiveLength):
        parabolic_curve(L=0.0, delta=0.1, H=0.2)


def test_table_curve_roundtrip():
    base = parabolic_curve(L=1.0, delta=0.1, H=0.2)
    x = np.linspace(0.0, 1.0, 101)
    curve = table_curve(x, base.h(x))
    assert curve.epsilon == pytest.approx(0.2, rel=1e-6)
    probe = np.linspace(0.0, 1.0, 37)
    np.testing.assert_allclose(curve.h(probe), base.h(probe), atol=1e-9)


def test_sine_squared_flat_lateral_slope():
    curve = sine_squared_curve(L=1.0, delta=0.1, H=0.2)
    assert curve.hprime(0.0) == pytest.approx(0.0, abs=1e-12)
    assert curve.hprime(1.0) == pytest.approx(0.0, abs=1e-12)
    assert curve.epsilon == pytest.approx(0.2)


@settings(max_examples=30, deadline=None)
@given(lam=st.floats(min_value=1e-3, max_value=1e3))
def test_epsilon_invariant_under_rescaling(lam):
    base = parabolic_curve(L=1.0, delta=0.1, H=0.2)
    scaled = parabolic_curve(L=lam * 1.0, delta=lam * 0.1, H=lam * 0.2)
    assert scaled.epsilon == pytest.approx(base.epsilon, rel=1e-12)
