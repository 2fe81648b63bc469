import sys
from math import sqrt
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from thinlayer import ClosureSet, GasParameters


@pytest.fixture(scope="session")
def gas():
    return GasParameters()


@pytest.fixture(scope="session")
def closures(gas):
    return ClosureSet.from_gas(gas)


@pytest.fixture(scope="session")
def strong_gas():
    """U^2 / (2 i0) = 0.5 exactly: the strongest compressibility the
    validity range comfortably allows."""
    g = GasParameters()
    return GasParameters(U=sqrt(2.0 * g.c_p * g.T_h))


@pytest.fixture(scope="session")
def strong_closures(strong_gas):
    return ClosureSet.from_gas(strong_gas)


@pytest.fixture(scope="session")
def weak_gas():
    """The near-incompressible regime (a 4 m/s measured surface wind)."""
    return GasParameters(U=4.0)


@pytest.fixture(scope="session")
def weak_closures(weak_gas):
    return ClosureSet.from_gas(weak_gas)
