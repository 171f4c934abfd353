"""
Monte Carlo experiments against the closed forms
- one independent trial per stream index, reduced with correctly rounded sums
- targets from combinatorics, z-score verdict, provenance
"""
import logging
import subprocess
from fractions import Fraction
from functools import partial
from pathlib import Path
from typing import Dict, Optional

from . import combinatorics, config
from .cones import generator_face_counts
from .errors import VerificationMismatch
from .estimators import (
    angle_sum,
    dual_accepted,
    estimate_intrinsic_volumes,
    estimate_quermass,
    estimate_size_functional,
    primal_face_counts,
    sample_config,
    sample_dual_cone,
    sample_weyl_cone,
)
from .models import Estimate, ExperimentSpec, Quantity, Report, RngSpec
from .tessellation import cone_face_list, cone_faces
from .workers import parallel_map

logger = logging.getLogger(__name__)


# ============================================================
# Targets
# ============================================================

def target_of(spec: ExperimentSpec) -> Fraction:
    """Closed-form expectation the experiment is checked against"""
    f, n, d, k, j = spec.family, spec.n, spec.d, spec.k, spec.j
    q = spec.quantity
    if q == Quantity.FK:
        return combinatorics.expected_face_count(f, n, d, k)
    if q == Quantity.YKJ:
        return combinatorics.expected_size_functional(f, n, d, k, j)
    if q == Quantity.UJ:
        return combinatorics.expected_quermass(f, n, d, j)
    if q == Quantity.VJ:
        return combinatorics.expected_intrinsic_volume(f, n, d, j)
    if q == Quantity.LAMBDA:
        return combinatorics.expected_angle_sum(f, n, d, k)
    if q == Quantity.DUAL_FK:
        return combinatorics.expected_dual_face_count(f, n, d, k)
    return combinatorics.acceptance_probability(f, n, d)


# ============================================================
# Trials
# ============================================================

def _trial(spec: ExperimentSpec, index: int) -> float:
    """One independent draw of the quantity; stream index = trial index"""
    rng = RngSpec(seed=spec.seed).substream(index)
    q = spec.quantity

    if q == Quantity.ACCEPTANCE:
        cfg = sample_config(spec.dist, spec.family, spec.n, spec.d, rng)
        return 1.0 if dual_accepted(cfg) else 0.0

    if q == Quantity.DUAL_FK:
        sample = sample_dual_cone(spec.family, spec.dist, spec.n, spec.d, rng)
        dual_counts = generator_face_counts(sample.cone)
        primal = primal_face_counts(sample.config)
        for k in range(spec.d):
            if dual_counts[k] != primal[spec.d - k]:
                raise VerificationMismatch(
                    f'dual cone has f_{k} = {dual_counts[k]} but its polar has f_{spec.d - k} = {primal[spec.d - k]}'
                )
        return float(dual_counts[spec.k])

    cfg = sample_config(spec.dist, spec.family, spec.n, spec.d, rng.substream(0))
    ordering, cone = sample_weyl_cone(cfg, rng.substream(1))
    inner = rng.substream(2)

    if q == Quantity.FK:
        return float(len(cone_faces(cfg, ordering, spec.k)))
    if q == Quantity.UJ:
        return estimate_quermass(cone, spec.j, spec.inner_trials, inner).mean
    if q == Quantity.VJ:
        volumes = estimate_intrinsic_volumes(cone, cone_face_list(cfg, ordering), spec.inner_trials, inner)
        return volumes[spec.j].mean
    if q == Quantity.LAMBDA:
        return angle_sum(cfg, ordering, spec.k, spec.inner_trials, inner).mean
    d, k, j = spec.d, spec.k, spec.j
    return estimate_size_functional(cfg, ordering, d - k + j, d - k, spec.inner_trials, inner).mean


# ============================================================
# Runner
# ============================================================

def git_revision() -> str:
    """Commit hash of the working tree, or 'unknown' outside a checkout"""
    try:
        out = subprocess.run(
            ('git', 'rev-parse', 'HEAD'),
            cwd=Path(__file__).resolve().parent,
            stdout=subprocess.PIPE, stderr=subprocess.DEVNULL,
            universal_newlines=True, timeout=5,
        )
    except (OSError, subprocess.SubprocessError):
        return 'unknown'
    return out.stdout.strip() if out.returncode == 0 and out.stdout.strip() else 'unknown'


def run_experiment(spec: ExperimentSpec, threads: Optional[int] = None,
                   provenance: Optional[Dict[str, str]] = None) -> Report:
    """Run spec.trials independent trials and compare the mean with the closed form"""
    target = target_of(spec)
    logger.info('experiment %s (family %s, n=%d, d=%d, k=%s, j=%s): %d trials, target %s',
                spec.quantity.value, spec.family.value, spec.n, spec.d, spec.k, spec.j, spec.trials, target)
    values = parallel_map(partial(_trial, spec), range(spec.trials), threads)
    estimate = Estimate.from_samples(values, target)
    passed = estimate.within(config.Z_LIMIT)
    if not passed:
        logger.warning('mean %.6g misses target %s (z-score %s, limit %.1f)',
                       estimate.mean, target, estimate.z_score, config.Z_LIMIT)
    meta = {'revision': git_revision(), 'dist': spec.dist.value}
    meta.update(provenance or {})
    return Report(spec=spec, estimate=estimate, passed=passed, provenance=meta)
