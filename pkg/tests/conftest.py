import pytest

from filmspread import Geometry, continue_to_zero_delta, make_rheology, to_physical


@pytest.fixture(scope="session")
def rheo2():
    return make_rheology(2.0)


@pytest.fixture(scope="session")
def shoot_planar_zero(rheo2):
    """theta = 0 planar continuation for lambda = 2, shared across modules."""
    return continue_to_zero_delta(Geometry.PLANAR, rheo2, 0.0)


@pytest.fixture(scope="session")
def shoot_radial_zero(rheo2):
    return continue_to_zero_delta(Geometry.RADIAL, rheo2, 0.0)


@pytest.fixture(scope="session")
def profile_planar_zero(rheo2, shoot_planar_zero):
    return to_physical(shoot_planar_zero, rheo2)
