"""
Monte Carlo estimators for conic functionals
- random point configurations, Weyl random cones, dual Weyl cones
- quermassintegrals U_j by random subspaces (exact intersection test)
- intrinsic volumes v_j by Gaussian projection, solid angles, size functionals
"""
import logging
import math
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from . import config
from .combinatorics import acceptance_probability
from .cones import (
    ConeH,
    FaceFrame,
    GeneratorCone,
    ProjectionFrames,
    dual_of_generators,
    is_zero_cone,
    linear_hull_basis,
    meets_subspace_nontrivially,
    project_batch,
)
from .errors import GeneralPositionError, ProjectionTieError, SamplingError
from .linalg import RationalMatrix, rank
from .models import Distribution, Estimate, Family, PointConfig, RngSpec, SignedOrdering
from .sampling import RandomStream, freeze, gaussian_frame
from .tessellation import (
    _cone_nontrivial,
    check_gp_lattice,
    cone_faces,
    cone_of,
    face_cone,
)

logger = logging.getLogger(__name__)


# ============================================================
# Random configurations and cones
# ============================================================

def sample_config(dist: Distribution, family: Family, n: int, d: int, rng: RngSpec,
                  attempts: Optional[int] = None) -> PointConfig:
    """i.i.d. points frozen to rationals; redrawn (on substreams) until in general position"""
    attempts = config.GP_ATTEMPTS if attempts is None else attempts
    for attempt in range(attempts):
        stream = RandomStream(rng if attempt == 0 else rng.substream(attempt))
        cfg = PointConfig(family=family, d=d, points=freeze(stream.points(dist, n, d)))
        if check_gp_lattice(cfg):
            return cfg
        logger.warning('sampled configuration not in general position (attempt %d), redrawing', attempt + 1)
    raise SamplingError(f'no configuration in general position after {attempts} attempts')


def sample_weyl_cone(cfg: PointConfig, rng: RngSpec,
                     cones: Optional[List[SignedOrdering]] = None) -> Tuple[SignedOrdering, ConeH]:
    """
    Uniform cone of the tessellation.

    With an enumerated list the draw is an index into it; without one, signed orderings
    are drawn uniformly and rejected while their cone is {0}, which is uniform on the
    nontrivial cones as well.
    """
    stream = RandomStream(rng)
    if cones is not None:
        ordering = cones[stream.index(len(cones))]
        return ordering, cone_of(cfg, ordering)
    candidates = None
    for _ in range(100_000):
        if cfg.family == Family.A:
            sigma = tuple(int(i) for i in np.argsort(stream.uniform(cfg.n), kind='stable'))
            eps = (1,) * cfg.n
        else:
            u = stream.uniform(2 * cfg.n)
            sigma = tuple(int(i) for i in np.argsort(u[:cfg.n], kind='stable'))
            eps = tuple(1 if x < 0.5 else -1 for x in u[cfg.n:])
        if _cone_nontrivial(cfg, (eps, sigma)):
            ordering = SignedOrdering(sigma=sigma, eps=eps)
            return ordering, cone_of(cfg, ordering)
        candidates = (eps, sigma)
    raise GeneralPositionError(f'no nontrivial cone found, last candidate {candidates}')


# ============================================================
# Quermassintegrals and solid angles
# ============================================================

def estimate_quermass(C: ConeH, j: int, trials: int, rng: RngSpec,
                      target=None) -> Estimate:
    """(1/2) P(C ∩ L != {0}) for a uniform (d-j)-dimensional subspace L"""
    d = C.ambient_dim
    if not 0 <= j <= d:
        raise ValueError(f'quermass index must lie in 0..{d}, got {j}')
    if j == 0:
        return Estimate.from_samples([0.0 if is_zero_cone(C) else 0.5] * trials, target)
    if j == d:
        return Estimate.from_samples([0.0] * trials, target)
    stream = RandomStream(rng)
    values = []
    redraws = 0
    while len(values) < trials:
        _, frozen = gaussian_frame(stream, d, d - j)
        U = RationalMatrix(frozen, d - j)
        if rank(U) < d - j:
            redraws += 1
            continue
        values.append(0.5 if meets_subspace_nontrivially(C, U) else 0.0)
    if redraws:
        logger.info('redrew %d degenerate subspaces', redraws)
    return Estimate.from_samples(values, target)


def estimate_solid_angle(F: ConeH, trials: int, rng: RngSpec, target=None) -> Estimate:
    """Fraction of the unit sphere of lin F covered by F"""
    frame = FaceFrame(F, linear_hull_basis(F).cols)
    if frame.dim == 0:
        raise ValueError('the solid angle of {0} is undefined')
    stream = RandomStream(rng)
    z = stream.normal((trials, frame.dim)) @ frame.basis.T
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    inside = np.all(z @ frame.rows.T <= 0, axis=1) if frame.rows.shape[0] else np.ones(trials, bool)
    return _from_hits(int(inside.sum()), trials, target)


def _from_hits(hits: int, trials: int, target=None) -> Estimate:
    """Bernoulli frequency with the sample standard error"""
    p = hits / trials
    stderr = math.sqrt(p * (1 - p) / (trials - 1)) if trials > 1 else 0.0
    return Estimate.with_target(p, stderr, trials, target)


# ============================================================
# Intrinsic volumes
# ============================================================

def estimate_intrinsic_volumes(C: ConeH, faces: List[Tuple[ConeH, int]], trials: int,
                               rng: RngSpec, targets: Optional[List] = None) -> List[Estimate]:
    """
    Histogram of the face dimension hit by the projection of a Gaussian vector.

    Ties in the KKT test are redrawn, at most TIE_REDRAWS of them; the cells always add up to the trial count.
    """
    d = C.ambient_dim
    frames = ProjectionFrames(faces)
    stream = RandomStream(rng)
    counts = np.zeros(d + 1, dtype=int)
    done, ties = 0, 0
    while done < trials:
        batch = stream.normal((trials - done, d))
        _, dims = project_batch(frames, batch)
        good = dims[dims >= 0]
        ties += int(np.sum(dims < 0))
        if ties > config.TIE_REDRAWS:
            raise ProjectionTieError(f'{ties} tied projections after {done} accepted draws, cap is {config.TIE_REDRAWS}')
        counts += np.bincount(good, minlength=d + 1)[:d + 1]
        done += good.size
    if ties:
        logger.info('redrew %d tied projections', ties)
    targets = targets or [None] * (d + 1)
    return [_from_hits(int(counts[j]), trials, targets[j]) for j in range(d + 1)]


# ============================================================
# Size functionals
# ============================================================

def estimate_size_functional(cfg: PointConfig, ordering: SignedOrdering, k: int, j: int,
                             trials: int, rng: RngSpec, target=None) -> Estimate:
    """Y_{k,j}: sum of U_j over the k-faces of the cone, trials split evenly over the faces"""
    if not 0 <= j < k <= cfg.d:
        raise ValueError(f'size functional needs 0 <= j < k <= d, got k={k}, j={j}')
    reps = cone_faces(cfg, ordering, k)
    per_face = max(1, trials // max(1, len(reps)))
    parts = [estimate_quermass(face_cone(cfg, rep), j, per_face, rng.substream(i))
             for i, rep in enumerate(reps)]
    mean = math.fsum(p.mean for p in parts)
    stderr = math.sqrt(math.fsum(p.stderr ** 2 for p in parts))
    return Estimate.with_target(mean, stderr, per_face * len(parts), target)


def angle_sum(cfg: PointConfig, ordering: SignedOrdering, k: int, trials: int, rng: RngSpec) -> Estimate:
    """Lambda_k: sum of the solid angles of the k-faces"""
    reps = cone_faces(cfg, ordering, k)
    parts = [estimate_solid_angle(face_cone(cfg, rep), trials, rng.substream(i)) for i, rep in enumerate(reps)]
    mean = math.fsum(p.mean for p in parts)
    stderr = math.sqrt(math.fsum(p.stderr ** 2 for p in parts))
    return Estimate.with_target(mean, stderr, trials * len(parts))


# ============================================================
# Dual cones
# ============================================================

class DualSample(BaseModel):
    """Accepted dual Weyl cone with the configuration it came from"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    config: PointConfig
    cone: GeneratorCone
    attempts: int


def dual_generators(cfg: PointConfig) -> GeneratorCone:
    """Y_i - Y_(i+1) for i < n, plus Y_n for family B"""
    y = cfg.points
    columns = [tuple(a - b for a, b in zip(y[i], y[i + 1])) for i in range(cfg.n - 1)]
    if cfg.family == Family.B:
        columns.append(y[-1])
    return GeneratorCone(generators=RationalMatrix.from_columns(columns, cfg.d))


def identity_ordering(n: int) -> SignedOrdering:
    return SignedOrdering(sigma=tuple(range(n)), eps=(1,) * n)


def dual_accepted(cfg: PointConfig) -> bool:
    """pos(generators) != R^d, i.e. its polar is not {0}"""
    return not is_zero_cone(dual_of_generators(dual_generators(cfg)))


def sample_dual_cone(family: Family, dist: Distribution, n: int, d: int, rng: RngSpec,
                     max_attempts: int = 1000) -> DualSample:
    """Rejection sampler for the positive hull of the chain generators, conditioned on != R^d"""
    for attempt in range(max_attempts):
        cfg = sample_config(dist, family, n, d, rng.substream(attempt))
        if dual_accepted(cfg):
            return DualSample(config=cfg, cone=dual_generators(cfg), attempts=attempt + 1)
    raise SamplingError(
        f'no accepted dual cone in {max_attempts} attempts; '
        f'acceptance probability is {acceptance_probability(family, n, d)}'
    )


def primal_face_counts(cfg: PointConfig) -> dict:
    """f_k of the polar of the dual cone, k = 0..d (the polar is the cone of the identity ordering)"""
    counts = {k: len(cone_faces(cfg, identity_ordering(cfg.n), k)) for k in range(1, cfg.d + 1)}
    counts[0] = 1
    return counts


def estimate_acceptance(family: Family, dist: Distribution, n: int, d: int, attempts: int,
                        rng: RngSpec) -> Estimate:
    """Empirical acceptance rate of the dual-cone construction"""
    hits = sum(dual_accepted(sample_config(dist, family, n, d, rng.substream(a))) for a in range(attempts))
    return _from_hits(hits, attempts, acceptance_probability(family, n, d))
