import numpy as np
import pytest

from weylcones import combinatorics as cb
from weylcones.errors import ParameterRangeError
from weylcones.estimators import sample_config
from weylcones.models import Distribution, Family, RngSpec
from weylcones.sphere import export_sphere, great_circle


def test_great_circle_frame():
    circle = great_circle([1, 2, 2])
    nu, u, w = (np.array(circle[key]) for key in ('normal', 'u', 'w'))
    np.testing.assert_allclose(nu, [1 / 3, 2 / 3, 2 / 3])
    np.testing.assert_allclose([u @ u, w @ w, u @ w, u @ nu, w @ nu], [1, 1, 0, 0, 0], atol=1e-11)


def test_export(config_a43):
    data = export_sphere(config_a43)
    assert data['schema'] == 1
    assert (data['family'], data['n'], data['d']) == ('A', 4, 3)
    assert len(data['great_circles']) == 6
    assert len(data['cones']) == cb.region_count(data['family'], 4, 3)
    vertices = [v for cone in data['cones'] for v in cone['vertices']]
    assert len(vertices) == cb.expected_incidence_sum('A', 4, 3, 1)
    np.testing.assert_allclose(np.linalg.norm(vertices, axis=1), 1.0, atol=1e-11)


def test_polygons_are_counter_clockwise(config_a43):
    for cone in export_sphere(config_a43)['cones']:
        rays = np.array(cone['vertices'])
        centre = rays.sum(axis=0)
        turns = [np.linalg.det([rays[i], rays[(i + 1) % len(rays)], centre]) for i in range(len(rays))]
        assert all(t > 0 for t in turns)


def test_export_needs_three_dimensions(config_a42):
    with pytest.raises(ParameterRangeError):
        export_sphere(config_a42)


@pytest.mark.slow
@pytest.mark.parametrize('family, n', [(Family.B, 6), (Family.A, 9)])
def test_export_of_36_planes(family, n):
    cfg = sample_config(Distribution.GAUSSIAN, family, n, 3, RngSpec(seed=n))
    data = export_sphere(cfg)
    assert len(data['great_circles']) == 36
    assert len(data['cones']) == cb.region_count(family, n, 3)
