import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from weylcones import combinatorics as cb
from weylcones import config, estimators
from weylcones.cones import ConeH, GeneratorCone, dual_of_generators, extreme_rays, generator_face_counts
from weylcones.estimators import (
    angle_sum,
    dual_accepted,
    dual_generators,
    estimate_acceptance,
    estimate_intrinsic_volumes,
    estimate_quermass,
    estimate_size_functional,
    estimate_solid_angle,
    primal_face_counts,
    sample_config,
    sample_dual_cone,
    sample_weyl_cone,
)
from weylcones.errors import ProjectionTieError
from weylcones.linalg import RationalMatrix
from weylcones.models import Distribution, Estimate, Family, RngSpec
from weylcones.tessellation import cone_face_list, enumerate_cones

Z = 4.0


# ============================================================
# Estimate
# ============================================================

def test_estimate_from_samples():
    est = Estimate.from_samples([0.0, 1.0, 0.0, 1.0], Fraction(1, 2))
    assert est.mean == 0.5
    assert est.stderr == pytest.approx((1 / 3) ** 0.5 / 2)
    assert est.z_score == 0.0
    assert est.within(Z)


def test_estimate_exact_hit_without_spread():
    assert Estimate.from_samples([1.0] * 5, Fraction(1)).within(Z)
    assert not Estimate.from_samples([1.0] * 5, Fraction(1, 2)).within(Z)


# ============================================================
# Fixed cones
# ============================================================

def test_quadrant_quermass(quadrant):
    est = estimate_quermass(quadrant, 1, 4000, RngSpec(seed=1), target=Fraction(1, 4))
    assert est.within(Z)


def test_quermass_edge_indices(quadrant):
    assert estimate_quermass(quadrant, 0, 10, RngSpec(seed=1)).mean == 0.5
    assert estimate_quermass(quadrant, 2, 10, RngSpec(seed=1)).mean == 0.0
    with pytest.raises(ValueError):
        estimate_quermass(quadrant, 3, 10, RngSpec(seed=1))


def test_quadrant_intrinsic_volumes(quadrant, quadrant_faces):
    volumes = estimate_intrinsic_volumes(quadrant, quadrant_faces, 20_000, RngSpec(seed=2),
                                         targets=[Fraction(1, 4), Fraction(1, 2), Fraction(1, 4)])
    assert sum(v.mean for v in volumes) == pytest.approx(1.0, abs=1e-12)
    assert all(v.within(Z) for v in volumes)


def test_half_line_intrinsic_volumes():
    ray = ConeH.from_rows(2, eq=[[0, 1]], ineq=[[-1, 0]])
    volumes = estimate_intrinsic_volumes(ray, [(ray, 1)], 10_000, RngSpec(seed=3),
                                         targets=[Fraction(1, 2), Fraction(1, 2), Fraction(0)])
    assert all(v.within(Z) for v in volumes)
    assert volumes[2].mean == 0.0


def test_tied_projections_are_capped(quadrant, quadrant_faces, monkeypatch):
    monkeypatch.setattr(config, 'TIE_REDRAWS', 50)
    monkeypatch.setattr(estimators, 'project_batch', lambda frames, batch: (batch, np.full(len(batch), -1)))
    with pytest.raises(ProjectionTieError):
        estimate_intrinsic_volumes(quadrant, quadrant_faces, 20, RngSpec(seed=2))


def test_solid_angles(quadrant, half_plane):
    assert estimate_solid_angle(quadrant, 20_000, RngSpec(seed=4), Fraction(1, 4)).within(Z)
    assert estimate_solid_angle(half_plane, 20_000, RngSpec(seed=5), Fraction(1, 2)).within(Z)
    ray = ConeH.from_rows(2, eq=[[0, 1]], ineq=[[-1, 0]])
    assert estimate_solid_angle(ray, 20_000, RngSpec(seed=6), Fraction(1, 2)).within(Z)


def test_solid_angle_of_zero_cone_is_undefined():
    with pytest.raises(ValueError):
        estimate_solid_angle(ConeH.from_rows(2, eq=[[1, 0], [0, 1]]), 10, RngSpec(seed=1))


def test_quadrant_reproducible(quadrant):
    a = estimate_quermass(quadrant, 1, 500, RngSpec(seed=9))
    b = estimate_quermass(quadrant, 1, 500, RngSpec(seed=9))
    assert a == b


# ============================================================
# Weyl cones
# ============================================================

def test_uniform_cone_choice(config_a42):
    cones = enumerate_cones(config_a42)
    counts = Counter(sample_weyl_cone(config_a42, RngSpec(seed=1, stream=i), cones)[0] for i in range(1200))
    assert set(counts) <= set(cones)
    assert len(counts) == len(cones)
    # chi-square with 11 degrees of freedom, far tail
    expected = 1200 / len(cones)
    chi2 = sum((counts[c] - expected) ** 2 / expected for c in cones)
    assert chi2 < 45


def test_rejection_sampler_hits_only_cones(config_b32):
    cones = set(enumerate_cones(config_b32))
    for i in range(50):
        ordering, _ = sample_weyl_cone(config_b32, RngSpec(seed=2, stream=i))
        assert ordering in cones


def test_rejection_sampler_is_uniform():
    cfg = sample_config(Distribution.GAUSSIAN, Family.A, 3, 2, RngSpec(seed=3))
    cones = enumerate_cones(cfg)
    counts = Counter(sample_weyl_cone(cfg, RngSpec(seed=12, stream=i))[0] for i in range(1200))
    assert set(counts) == set(cones)
    # chi-square with 5 degrees of freedom, far tail
    expected = 1200 / len(cones)
    assert sum((counts[c] - expected) ** 2 / expected for c in cones) < 25


def test_size_functional_of_the_cone_is_its_quermass(config_a43):
    ordering, cone = sample_weyl_cone(config_a43, RngSpec(seed=3))
    rng = RngSpec(seed=4)
    whole = estimate_size_functional(config_a43, ordering, 3, 1, 300, rng)
    direct = estimate_quermass(cone, 1, 300, rng.substream(0))
    assert whole.mean == direct.mean


def test_size_functional_range(config_a43):
    ordering, _ = sample_weyl_cone(config_a43, RngSpec(seed=3))
    with pytest.raises(ValueError):
        estimate_size_functional(config_a43, ordering, 2, 2, 10, RngSpec(seed=1))


def test_weyl_cone_volumes_sum_to_one(config_b32):
    ordering, cone = sample_weyl_cone(config_b32, RngSpec(seed=5))
    volumes = estimate_intrinsic_volumes(cone, cone_face_list(config_b32, ordering), 2000, RngSpec(seed=6))
    assert sum(v.mean for v in volumes) == pytest.approx(1.0, abs=1e-12)


def test_top_angle_sum_is_the_solid_angle(config_a42):
    ordering, cone = sample_weyl_cone(config_a42, RngSpec(seed=7))
    rng = RngSpec(seed=8)
    assert angle_sum(config_a42, ordering, 2, 1000, rng).mean == \
        estimate_solid_angle(cone, 1000, rng.substream(0)).mean


def test_quermass_duality(config_a43):
    _, cone = sample_weyl_cone(config_a43, RngSpec(seed=21))
    polar = dual_of_generators(GeneratorCone(generators=RationalMatrix.from_columns(extreme_rays(cone), 3)))
    for j in range(3):
        a = estimate_quermass(cone, j, 1500, RngSpec(seed=30, stream=j))
        b = estimate_quermass(polar, 3 - j, 1500, RngSpec(seed=31, stream=j))
        assert abs(a.mean + b.mean - 0.5) <= Z * math.hypot(a.stderr, b.stderr)


# ============================================================
# Dual cones
# ============================================================

def test_dual_cone_always_accepted_for_three_points():
    sample = sample_dual_cone(Family.A, Distribution.GAUSSIAN, 3, 2, RngSpec(seed=1))
    assert sample.attempts == 1
    assert sample.cone.count == 2


def test_dual_duality_on_samples():
    for family, n, d in ((Family.A, 4, 2), (Family.B, 3, 2), (Family.A, 5, 3)):
        for i in range(5):
            sample = sample_dual_cone(family, Distribution.GAUSSIAN, n, d, RngSpec(seed=10, stream=i))
            dual = generator_face_counts(sample.cone)
            primal = primal_face_counts(sample.config)
            assert all(dual[k] == primal[d - k] for k in range(d + 1))


def test_dual_generators_of_family_b():
    cfg = sample_config(Distribution.GAUSSIAN, Family.B, 3, 2, RngSpec(seed=2))
    G = dual_generators(cfg)
    assert G.count == 3
    assert G.generators.column(2) == cfg.points[2]


def test_acceptance_rate():
    est = estimate_acceptance(Family.A, Distribution.GAUSSIAN, 4, 2, 400, RngSpec(seed=3))
    assert est.target == Fraction(1, 2)
    assert est.within(Z)


def test_acceptance_is_certain_for_three_points():
    cfg = sample_config(Distribution.SPHERE, Family.A, 3, 2, RngSpec(seed=4))
    assert dual_accepted(cfg)


@pytest.mark.slow
def test_acceptance_rate_family_b():
    est = estimate_acceptance(Family.B, Distribution.GAUSSIAN, 3, 2, 4000, RngSpec(seed=5))
    assert est.target == cb.acceptance_probability(Family.B, 3, 2)
    assert est.within(Z)


@pytest.mark.slow
def test_acceptance_rate_family_a():
    est = estimate_acceptance(Family.A, Distribution.GAUSSIAN, 4, 2, 4000, RngSpec(seed=6))
    assert est.target == Fraction(1, 2)
    assert est.within(Z)


@pytest.mark.slow
def test_quadrant_at_scale(quadrant, quadrant_faces):
    trials = 100_000
    quermass = estimate_quermass(quadrant, 1, trials, RngSpec(seed=40), target=Fraction(1, 4))
    volumes = estimate_intrinsic_volumes(quadrant, quadrant_faces, trials, RngSpec(seed=41),
                                         targets=[Fraction(1, 4), Fraction(1, 2), Fraction(1, 4)])
    angle = estimate_solid_angle(quadrant, trials, RngSpec(seed=42), Fraction(1, 4))
    for est in [quermass, angle] + volumes:
        assert est.within(Z)
        assert abs(est.mean - float(est.target)) < 0.01
