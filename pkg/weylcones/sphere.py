"""
Spherical tessellation data (d = 3)
- great circles cut out by the hyperplanes of the arrangement
- one spherical polygon per cone, vertices counter-clockwise seen from outside
"""
import logging
from typing import Dict, List, Sequence

import numpy as np

from . import config
from .cones import ray_direction
from .errors import ParameterRangeError
from .models import PointConfig, SignedOrdering
from .tessellation import build_arrangement, cone_faces, face_cone, walk_cones

logger = logging.getLogger(__name__)


def _rounded(v: np.ndarray) -> List[float]:
    return [float(f'{x:.12g}') for x in v]


def great_circle(normal: Sequence) -> Dict[str, List[float]]:
    """Unit normal plus an orthonormal pair (u, w) with the circle t -> cos t u + sin t w"""
    nu = np.array([float(x) for x in normal])
    nu /= np.linalg.norm(nu)
    helper = np.eye(3)[int(np.argmin(np.abs(nu)))]
    u = np.cross(nu, helper)
    u /= np.linalg.norm(u)
    w = np.cross(nu, u)
    return {'normal': _rounded(nu), 'u': _rounded(u), 'w': _rounded(w)}


def cone_polygon(cfg: PointConfig, ordering: SignedOrdering) -> List[List[float]]:
    """Unit rays of the cone ordered counter-clockwise around their normalized sum"""
    rays = np.array([[float(x) for x in ray_direction(face_cone(cfg, rep))] for rep in cone_faces(cfg, ordering, 1)])
    rays /= np.linalg.norm(rays, axis=1, keepdims=True)
    centre = rays.sum(axis=0)
    centre /= np.linalg.norm(centre)
    e1 = rays[0] - (rays[0] @ centre) * centre
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(centre, e1)
    angles = np.arctan2(rays @ e2, rays @ e1)
    return [_rounded(rays[i]) for i in np.argsort(angles, kind='stable')]


def export_sphere(cfg: PointConfig) -> Dict[str, object]:
    """Great circles and cone polygons of a tessellation of R^3, ready for json"""
    if cfg.d != 3:
        raise ParameterRangeError(f'sphere export needs d = 3, got d={cfg.d}')
    circles = [great_circle(normal) for normal in build_arrangement(cfg)]
    cones = walk_cones(cfg, verify_gp=False)
    polygons = [{'sigma': list(o.sigma), 'eps': list(o.eps), 'vertices': cone_polygon(cfg, o)} for o in cones]
    logger.info('exported %d great circles and %d cones', len(circles), len(polygons))
    return {
        'schema': config.SCHEMA_VERSION,
        'family': cfg.family.value,
        'n': cfg.n,
        'd': cfg.d,
        'points': cfg.model_dump()['points'],
        'great_circles': circles,
        'cones': polygons,
    }
