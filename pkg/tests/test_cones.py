from fractions import Fraction

import numpy as np
import pytest
from numpy.testing import assert_allclose

from weylcones.cones import (
    ConeH,
    GeneratorCone,
    ProjectionFrames,
    cone_dim,
    cone_rays,
    contains,
    dual_of_generators,
    extreme_rays,
    generator_face_counts,
    implicit_equalities,
    in_relint,
    is_zero_cone,
    lineality_dim,
    meets_subspace_nontrivially,
    project_batch,
    project_onto_cone,
    ray_direction,
    relint_meets_subspace,
)
from weylcones.errors import DimensionMismatchError
from weylcones.linalg import RationalMatrix
from weylcones.tessellation import cone_of, enumerate_cones


def _line(*direction):
    return RationalMatrix.from_columns([direction], len(direction))


class TestDimension:

    def test_quadrant(self, quadrant):
        assert cone_dim(quadrant) == 2
        assert not is_zero_cone(quadrant)
        assert lineality_dim(quadrant) == 0

    def test_opposite_half_planes_meet_in_a_line(self):
        C = ConeH.from_rows(2, ineq=[[0, 1], [0, -1]])
        assert implicit_equalities(C) == [0, 1]
        assert cone_dim(C) == 1
        assert lineality_dim(C) == 1

    def test_zero_cone(self):
        C = ConeH.from_rows(2, ineq=[[1, 0], [-1, 0], [0, 1], [0, -1]])
        assert is_zero_cone(C)
        assert cone_dim(C) == 0

    def test_pointed_triangle_is_not_zero(self):
        C = ConeH.from_rows(3, ineq=[[-1, 0, 0], [0, -1, 0], [0, 0, -1]])
        assert not is_zero_cone(C)
        assert cone_dim(C) == 3

    def test_whole_space(self):
        C = ConeH.from_rows(3)
        assert not is_zero_cone(C)
        assert lineality_dim(C) == 3

    def test_equalities_only(self):
        assert is_zero_cone(ConeH.from_rows(2, eq=[[1, 0], [0, 1]]))

    def test_row_width_checked(self):
        # surfaces as a pydantic ValidationError, itself a ValueError
        with pytest.raises(ValueError):
            ConeH(ambient_dim=3, eq_rows=RationalMatrix.empty(2), ineq_rows=RationalMatrix.empty(3))


class TestSubspaces:

    def test_lines_through_the_quadrant(self, quadrant):
        assert meets_subspace_nontrivially(quadrant, _line(1, 1))
        assert meets_subspace_nontrivially(quadrant, _line(1, -1)) is False
        # a line spanned by an edge touches the boundary only
        assert meets_subspace_nontrivially(quadrant, _line(1, 0))
        assert not relint_meets_subspace(quadrant, _line(1, 0))
        assert relint_meets_subspace(quadrant, _line(2, 3))

    def test_relint_of_a_subspace(self):
        C = ConeH.from_rows(2, eq=[[0, 1]])
        assert relint_meets_subspace(C, _line(1, 1)) is True

    def test_membership(self, quadrant):
        assert contains(quadrant, [1, 0])
        assert not in_relint(quadrant, [1, 0])
        assert in_relint(quadrant, ['1/2', 3])
        assert not contains(quadrant, [-1, 1])
        with pytest.raises(DimensionMismatchError):
            contains(quadrant, [1, 2, 3])


class TestRaysAndFaces:

    def test_ray_direction(self, quadrant_faces):
        _, x_axis, y_axis = (face for face, _ in quadrant_faces)
        assert ray_direction(x_axis) == (1, 0)
        assert ray_direction(y_axis) == (0, 1)
        assert set(cone_rays(quadrant_faces)) == {(1, 0), (0, 1)}

    def test_ray_direction_needs_a_ray(self, quadrant):
        with pytest.raises(ValueError):
            ray_direction(quadrant)

    def test_extreme_rays(self, quadrant):
        assert set(extreme_rays(quadrant)) == {(1, 0), (0, 1)}
        octant = ConeH.from_rows(3, ineq=[[-1, 0, 0], [0, -1, 0], [0, 0, -1]])
        assert len(extreme_rays(octant)) == 3

    def test_generator_face_counts(self):
        G = GeneratorCone(generators=RationalMatrix.from_columns([[1, 0], [0, 1]], 2))
        assert generator_face_counts(G) == {0: 1, 1: 2, 2: 1}
        square = GeneratorCone(generators=RationalMatrix.from_columns(
            [[1, 0, 1], [0, 1, 1], [-1, 0, 1], [0, -1, 1]], 3))
        assert generator_face_counts(square) == {0: 1, 1: 4, 2: 4, 3: 1}

    def test_interior_generator_is_not_a_ray(self):
        G = GeneratorCone(generators=RationalMatrix.from_columns([[1, 0], [1, 1], [0, 1]], 2))
        assert generator_face_counts(G) == {0: 1, 1: 2, 2: 1}

    def test_dual_of_generators(self):
        G = GeneratorCone(generators=RationalMatrix.from_columns([[1, 0], [0, 1]], 2))
        polar = dual_of_generators(G)
        assert contains(polar, [-1, -2])
        assert not contains(polar, [1, -1])


class TestPolarity:

    @staticmethod
    def _polar(C):
        rays = extreme_rays(C)
        return dual_of_generators(GeneratorCone(generators=RationalMatrix.from_columns(rays, C.ambient_dim)))

    @staticmethod
    def _directions(rays):
        return {tuple(Fraction(x) / max(abs(Fraction(y)) for y in ray) for x in ray) for ray in rays}

    def test_polar_of_the_square_pyramid(self):
        square = [[1, 0, 1], [0, 1, 1], [-1, 0, 1], [0, -1, 1]]
        C = dual_of_generators(GeneratorCone(generators=RationalMatrix.from_columns(square, 3)))
        assert len(extreme_rays(C)) == 4
        assert self._directions(extreme_rays(self._polar(C))) == self._directions(square)

    def test_double_dualization_returns_the_cone(self, quadrant):
        octant = ConeH.from_rows(3, ineq=[[-1, 0, 0], [0, -1, 0], [0, 0, -1]])
        for C in (quadrant, octant):
            assert self._directions(extreme_rays(self._polar(self._polar(C)))) == self._directions(extreme_rays(C))

    def test_double_dualization_of_weyl_cones(self, config_a43, config_b32):
        for cfg in (config_a43, config_b32):
            for ordering in enumerate_cones(cfg):
                C = cone_of(cfg, ordering)
                twice = self._polar(self._polar(C))
                assert self._directions(extreme_rays(twice)) == self._directions(extreme_rays(C))
                assert all(contains(twice, ray) for ray in extreme_rays(C))


class TestProjection:

    def test_quadrant_projection(self, quadrant_faces):
        x, dim = project_onto_cone(quadrant_faces, [1.0, 1.0])
        assert dim == 2
        assert_allclose(x, [1.0, 1.0])
        x, dim = project_onto_cone(quadrant_faces, [1.0, -1.0])
        assert dim == 1
        assert_allclose(x, [1.0, 0.0])
        x, dim = project_onto_cone(quadrant_faces, [-1.0, -2.0])
        assert dim == 0
        assert_allclose(x, [0.0, 0.0])

    def test_batch_matches_single_points(self, quadrant_faces):
        frames = ProjectionFrames(quadrant_faces)
        points = np.array([[2.0, 3.0], [-1.0, 4.0], [-5.0, -0.5], [3.0, -1.0]])
        proj, dims = project_batch(frames, points)
        assert list(dims) == [2, 1, 0, 1]
        assert_allclose(proj, [[2.0, 3.0], [0.0, 4.0], [0.0, 0.0], [3.0, 0.0]])

    def test_projection_is_nearest_point(self, quadrant_faces):
        frames = ProjectionFrames(quadrant_faces)
        rng = np.random.default_rng(0)
        points = rng.normal(size=(200, 2))
        proj, dims = project_batch(frames, points)
        assert np.all(dims >= 0)
        assert_allclose(proj, np.maximum(points, 0.0), atol=1e-12)

    def test_empty_face_list_rejected(self):
        with pytest.raises(ValueError):
            ProjectionFrames([])
