"""
Weyl chambers of the reflection arrangements in R^n
- chamber faces as chains over the unit vectors
- brute-force count of chamber faces meeting a subspace
- general position of a subspace, random generic subspaces
- link between tessellation faces and chamber faces meeting L-perp
"""
import logging
from functools import partial
from typing import Optional, Tuple

from . import config
from .cones import ConeH, meets_subspace_nontrivially
from .errors import ParameterRangeError, SamplingError
from .linalg import RationalMatrix, intersection_dim, rank
from .models import Family, FaceRep, PointConfig, RngSpec
from .sampling import RandomStream, gaussian_frame
from .tessellation import chain_cone, chain_reps, check_budget, face_multiplicity, lattice_subspaces, points_matrix
from .workers import parallel_map

logger = logging.getLogger(__name__)


def _unit_vectors(n: int) -> Tuple[Tuple[int, ...], ...]:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def chamber_face_cone(rep: FaceRep) -> ConeH:
    """C_(eps,sigma)(l) in R^n: the chain of rep read on the coordinates beta_i"""
    return chain_cone(_unit_vectors(rep.n), rep, rep.n)


def subspace_in_general_position(family: Family, n: int, U: RationalMatrix) -> bool:
    """U has independent columns and meets every lattice subspace K in dimension max(0, dim U - n + dim K)"""
    if U.rows != n:
        raise ParameterRangeError(f'subspace basis must have {n} rows, got {U.rows}')
    d = U.cols
    if rank(U) != d:
        return False
    return all(intersection_dim(K, U) == max(0, d - n + K.cols) for _, K in lattice_subspaces(family, n))


def random_subspace(family: Family, n: int, d: int, rng: RngSpec, attempts: Optional[int] = None) -> RationalMatrix:
    """Span of d rationalized Gaussian columns, redrawn until in general position"""
    attempts = config.GP_ATTEMPTS if attempts is None else attempts
    for attempt in range(attempts):
        stream = RandomStream(rng if attempt == 0 else rng.substream(attempt))
        _, frozen = gaussian_frame(stream, n, d)
        U = RationalMatrix(frozen, d)
        if subspace_in_general_position(family, n, U):
            return U
        logger.warning('random subspace (attempt %d) is degenerate, redrawing', attempt + 1)
    raise SamplingError(f'no generic {d}-dimensional subspace of R^{n} after {attempts} attempts')


def _weighted_hit(U: RationalMatrix, rep: FaceRep) -> int:
    return face_multiplicity(rep) if meets_subspace_nontrivially(chamber_face_cone(rep), U) else 0


def chamber_faces_meeting_subspace(family: Family, n: int, k: int, U: RationalMatrix,
                                   threads: Optional[int] = None, max_candidates: Optional[int] = None) -> int:
    """Pairs (chamber, k-face of it) whose face meets span(U) nontrivially, by brute force"""
    family = Family(family)
    if not 1 <= k <= n:
        raise ParameterRangeError(f'chamber faces need 1 <= k <= n, got k={k}')
    check_budget(family, n, max_candidates)
    reps = list(chain_reps(family, n, k))
    hits = parallel_map(partial(_weighted_hit, U), reps, threads)
    total = sum(hits)
    logger.info('%d canonical chamber %d-faces, weighted hits %d', len(reps), k, total)
    return total


def chamber_face_total(family: Family, n: int, k: int) -> int:
    """Sum of chamber multiplicities over the canonical chamber k-faces"""
    return sum(face_multiplicity(rep) for rep in chain_reps(family, n, k))


def face_meets_row_space(cfg: PointConfig, rep: FaceRep) -> bool:
    """The chamber face attached to rep meets L-perp = {(<v,y_i>)_i} nontrivially"""
    return meets_subspace_nontrivially(chamber_face_cone(rep), points_matrix(cfg))
