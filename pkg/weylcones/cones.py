"""
Polyhedral cones in H-representation
- ConeH (equalities <r,v> = 0, inequalities <r,v> <= 0) and GeneratorCone (positive hulls)
- dimension, triviality, lineality, duals
- subspace intersection tests and membership
- Euclidean projection with identification of the minimal face (floating point)
"""
import logging
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from . import config
from .errors import DimensionMismatchError, ProjectionTieError
from .linalg import (
    RationalMatrix,
    feasible_strict,
    kernel_basis,
    rank,
    strictly_positive_dependence,
    to_fraction,
)

logger = logging.getLogger(__name__)


# ============================================================
# Types
# ============================================================

class ConeH(BaseModel):
    """{v : E v = 0, A v <= 0}; always contains the origin"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    ambient_dim: int
    eq_rows: RationalMatrix
    ineq_rows: RationalMatrix

    @model_validator(mode='after')
    def _check(self):
        if self.eq_rows.cols != self.ambient_dim or self.ineq_rows.cols != self.ambient_dim:
            raise DimensionMismatchError(f'rows must have {self.ambient_dim} columns')
        return self

    @classmethod
    def from_rows(cls, ambient_dim: int, eq: Sequence[Sequence] = (), ineq: Sequence[Sequence] = ()) -> 'ConeH':
        return cls(
            ambient_dim=ambient_dim,
            eq_rows=RationalMatrix(eq, ambient_dim),
            ineq_rows=RationalMatrix(ineq, ambient_dim),
        )


class GeneratorCone(BaseModel):
    """pos{x_1, ..., x_m} with the x_i as matrix columns"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    generators: RationalMatrix

    @property
    def ambient_dim(self) -> int:
        return self.generators.rows

    @property
    def count(self) -> int:
        return self.generators.cols


# ============================================================
# Dimension and triviality
# ============================================================

def implicit_equalities(C: ConeH) -> List[int]:
    """Indices of inequality rows that vanish on all of C (one feasibility test per row)"""
    rows = C.ineq_rows
    forced = []
    for i in range(rows.rows):
        strict = rows.select_rows([i]).negate()
        weak = rows.select_rows([j for j in range(rows.rows) if j != i]).negate()
        if not feasible_strict(C.eq_rows, strict, weak):
            forced.append(i)
    return forced


def linear_hull_basis(C: ConeH) -> RationalMatrix:
    """Columns spanning lin C"""
    forced = C.ineq_rows.select_rows(implicit_equalities(C))
    return kernel_basis(C.eq_rows.vstack(forced))


def cone_dim(C: ConeH) -> int:
    """dim lin C"""
    return linear_hull_basis(C).cols


def is_zero_cone(C: ConeH) -> bool:
    """
    True iff C = {0}.

    On ker E the cone {w : M w <= 0} is {0} exactly when the rows of M positively
    span the whole space: full column rank plus a strictly positive dependence.
    """
    N = kernel_basis(C.eq_rows)
    if N.cols == 0:
        return True
    if C.ineq_rows.rows == 0:
        return False
    M = C.ineq_rows @ N
    return rank(M) == N.cols and strictly_positive_dependence(M)


def lineality_dim(C: ConeH) -> int:
    """dim(C ∩ -C)"""
    return kernel_basis(C.eq_rows.vstack(C.ineq_rows)).cols


def dual_of_generators(G: GeneratorCone) -> ConeH:
    """(pos{x_i})° = {v : <x_i, v> <= 0}"""
    return ConeH(
        ambient_dim=G.ambient_dim,
        eq_rows=RationalMatrix.empty(G.ambient_dim),
        ineq_rows=G.generators.transpose(),
    )


# ============================================================
# Subspaces and membership
# ============================================================

def restrict(C: ConeH, U: RationalMatrix) -> ConeH:
    """C ∩ span(U) written in the coordinates w of v = U w"""
    if U.rows != C.ambient_dim:
        raise DimensionMismatchError(f'subspace of R^{U.rows} against a cone in R^{C.ambient_dim}')
    return ConeH(ambient_dim=U.cols, eq_rows=C.eq_rows @ U, ineq_rows=C.ineq_rows @ U)


def meets_subspace_nontrivially(C: ConeH, U: RationalMatrix) -> bool:
    """C ∩ span(U) != {0}; U must have independent columns"""
    if U.cols == 0:
        return False
    return not is_zero_cone(restrict(C, U))


def relint_meets_subspace(C: ConeH, U: RationalMatrix) -> bool:
    """relint(C) ∩ span(U) != ∅"""
    forced = implicit_equalities(C)
    free = [i for i in range(C.ineq_rows.rows) if i not in set(forced)]
    if not free:
        return True
    equalities = C.eq_rows.vstack(C.ineq_rows.select_rows(forced))
    restricted = restrict(ConeH(ambient_dim=C.ambient_dim, eq_rows=equalities,
                                ineq_rows=C.ineq_rows.select_rows(free)), U)
    return feasible_strict(restricted.eq_rows, restricted.ineq_rows.negate())


def _point(C: ConeH, p: Sequence) -> Tuple[Fraction, ...]:
    point = tuple(to_fraction(x) for x in p)
    if len(point) != C.ambient_dim:
        raise DimensionMismatchError(f'point of dimension {len(point)} against R^{C.ambient_dim}')
    return point


def contains(C: ConeH, p: Sequence) -> bool:
    """p ∈ C, exactly"""
    point = _point(C, p)
    return all(x == 0 for x in C.eq_rows @ point) and all(x <= 0 for x in C.ineq_rows @ point)


def in_relint(C: ConeH, p: Sequence) -> bool:
    """p ∈ relint C, exactly"""
    if not contains(C, p):
        return False
    values = C.ineq_rows @ _point(C, p)
    forced = set(implicit_equalities(C))
    return all(v < 0 for i, v in enumerate(values) if i not in forced)


# ============================================================
# Rays and faces of positive hulls
# ============================================================

def ray_direction(C: ConeH) -> Tuple[Fraction, ...]:
    """Generator of a one-dimensional cone"""
    basis = linear_hull_basis(C)
    if basis.cols != 1:
        raise ValueError(f'expected a ray, got a cone of dimension {basis.cols}')
    ray = basis.column(0)
    if all(x <= 0 for x in C.ineq_rows @ ray):
        return ray
    return tuple(-x for x in ray)


def cone_rays(faces: Sequence[Tuple[ConeH, int]]) -> List[Tuple[Fraction, ...]]:
    """Extreme-ray directions of a pointed cone, read from its 1-faces"""
    return [ray_direction(face) for face, dim in faces if dim == 1]


def extreme_rays(C: ConeH) -> List[Tuple[Fraction, ...]]:
    """Extreme rays of a pointed cone by brute force over row subsets (small dimensions only)"""
    d = C.ambient_dim
    rays: Dict[Tuple[Fraction, ...], Tuple[Fraction, ...]] = {}
    needed = d - 1 - rank(C.eq_rows)
    for subset in combinations(range(C.ineq_rows.rows), max(needed, 0)):
        basis = kernel_basis(C.eq_rows.vstack(C.ineq_rows.select_rows(subset)))
        if basis.cols != 1:
            continue
        for ray in (basis.column(0), tuple(-x for x in basis.column(0))):
            if contains(C, ray):
                scale = max(abs(x) for x in ray)
                rays[tuple(x / scale for x in ray)] = ray
    return [rays[key] for key in sorted(rays)]


def generator_face_counts(G: GeneratorCone) -> Dict[int, int]:
    """
    Face census of pos{x_i} by exposed generator sets.

    S is the generator set of a face iff some w has <w, x_i> = 0 on S and < 0 off S;
    the face has dimension rank(x_S).
    """
    d, m = G.ambient_dim, G.count
    columns = G.generators.transpose()
    counts = {k: 0 for k in range(d + 1)}
    for size in range(m + 1):
        for subset in combinations(range(m), size):
            inside = columns.select_rows(subset)
            outside = [i for i in range(m) if i not in subset]
            if outside and not feasible_strict(inside, columns.select_rows(outside).negate()):
                continue
            counts[rank(inside)] += 1
    return counts


# ============================================================
# Projection (floating point)
# ============================================================

class FaceFrame:
    """Float data of one face: orthonormal basis of lin F and its relative-interior rows"""

    def __init__(self, face: ConeH, dim: int):
        self.dim = dim
        if dim == 0:
            self.basis = np.zeros((face.ambient_dim, 0))
            self.rows = np.zeros((0, face.ambient_dim))
            return
        hull = linear_hull_basis(face)
        if hull.cols != dim:
            raise ValueError(f'face declared {dim}-dimensional has dimension {hull.cols}')
        self.basis, _ = np.linalg.qr(hull.to_numpy())
        forced = set(implicit_equalities(face))
        free = [i for i in range(face.ineq_rows.rows) if i not in forced]
        rows = face.ineq_rows.select_rows(free).to_numpy().reshape(len(free), face.ambient_dim)
        norms = np.linalg.norm(rows, axis=1, keepdims=True)
        self.rows = rows / np.where(norms > 0, norms, 1.0)


class ProjectionFrames:
    """All face frames of one pointed cone plus its unit extreme rays"""

    def __init__(self, faces: Sequence[Tuple[ConeH, int]]):
        if not faces:
            raise ValueError('projection needs the face list of the cone')
        ambient = faces[0][0].ambient_dim
        self.ambient_dim = ambient
        self.frames = [FaceFrame(face, dim) for face, dim in faces]
        if not any(frame.dim == 0 for frame in self.frames):
            apex = ConeH.from_rows(ambient, eq=[[1 if i == j else 0 for j in range(ambient)] for i in range(ambient)])
            self.frames.append(FaceFrame(apex, 0))
        rays = [np.array([float(x) for x in ray]) for ray in cone_rays(faces)]
        if not rays:
            # only the apex cone lacks rays
            self.rays = np.zeros((0, ambient))
        else:
            stacked = np.vstack(rays)
            self.rays = stacked / np.linalg.norm(stacked, axis=1, keepdims=True)


def project_batch(frames: ProjectionFrames, points: np.ndarray,
                  tol: Optional[float] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    Project each row of points onto the cone.

    Returns (projections, face dimensions); a dimension of -1 marks a point
    for which no face or several faces passed the KKT test.
    """
    tol = config.KKT_TOL if tol is None else tol
    points = np.atleast_2d(np.asarray(points, dtype=float))
    count = points.shape[0]
    passes = np.zeros(count, dtype=int)
    out = np.zeros_like(points)
    dims = np.full(count, -1, dtype=int)
    for frame in frames.frames:
        proj = points @ frame.basis @ frame.basis.T
        inside = np.all(proj @ frame.rows.T < -tol, axis=1) if frame.rows.shape[0] else np.ones(count, bool)
        normal = np.all((points - proj) @ frames.rays.T <= tol, axis=1) if frames.rays.shape[0] \
            else np.ones(count, bool)
        hit = inside & normal
        passes += hit
        out[hit] = proj[hit]
        dims[hit] = frame.dim
    dims[passes != 1] = -1
    return out, dims


def project_onto_cone(faces: Sequence[Tuple[ConeH, int]], p: Sequence[float]) -> Tuple[np.ndarray, int]:
    """Nearest point of a pointed cone to p and the dimension of the face holding it in its relative interior"""
    frames = faces if isinstance(faces, ProjectionFrames) else ProjectionFrames(faces)
    proj, dims = project_batch(frames, np.asarray(p, dtype=float).reshape(1, -1))
    if dims[0] < 0:
        raise ProjectionTieError(f'no unique face for the projection of {list(p)}')
    return proj[0], int(dims[0])
