"""
Shared fixtures
- sampled configurations in general position for small (family, n, d)
- a few hand-written cones in the plane
"""
import pytest

from weylcones.cones import ConeH
from weylcones.estimators import sample_config
from weylcones.models import Distribution, Family, RngSpec


@pytest.fixture(scope='session')
def config_a42():
    return sample_config(Distribution.GAUSSIAN, Family.A, 4, 2, RngSpec(seed=11))


@pytest.fixture(scope='session')
def config_a43():
    return sample_config(Distribution.GAUSSIAN, Family.A, 4, 3, RngSpec(seed=12))


@pytest.fixture(scope='session')
def config_b32():
    return sample_config(Distribution.GAUSSIAN, Family.B, 3, 2, RngSpec(seed=13))


@pytest.fixture(scope='session')
def config_b22():
    return sample_config(Distribution.SYMM_EXP, Family.B, 2, 2, RngSpec(seed=14))


@pytest.fixture
def quadrant():
    """{x >= 0, y >= 0}"""
    return ConeH.from_rows(2, ineq=[[-1, 0], [0, -1]])


@pytest.fixture
def quadrant_faces(quadrant):
    x_axis = ConeH.from_rows(2, eq=[[0, 1]], ineq=[[-1, 0]])
    y_axis = ConeH.from_rows(2, eq=[[1, 0]], ineq=[[0, -1]])
    return [(quadrant, 2), (x_axis, 1), (y_axis, 1)]


@pytest.fixture
def half_plane():
    """{y >= 0}"""
    return ConeH.from_rows(2, ineq=[[0, -1]])
