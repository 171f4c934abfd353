"""
Counter-based random streams
- RandomStream: Philox keyed by the seed, counter offset by the stream index;
  substream paths are keyed through SeedSequence spawn keys
- uniforms, Box-Muller normals, symmetric exponentials
- freezing floats onto a dyadic grid of exact rationals
"""
import logging
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from . import config
from .models import Distribution, RngSpec

logger = logging.getLogger(__name__)


class RandomStream:
    """Reproducible draws for one (seed, stream) pair"""

    def __init__(self, rng: RngSpec):
        self.spec = rng
        if rng.path:
            # substreams get an independent key hashed from the whole (stream, path) tuple
            key = np.random.SeedSequence(entropy=rng.seed, spawn_key=(rng.stream,) + rng.path).generate_state(2, np.uint64)
            bit_generator = np.random.Philox(key=key)
        else:
            # stream index lives in the upper 128 counter bits; draws advance the lower ones
            bit_generator = np.random.Philox(key=rng.seed, counter=rng.stream << 128)
        self._generator = np.random.Generator(bit_generator)

    # ----------------------------------------
    # primitives
    # ----------------------------------------

    def uniform(self, size) -> np.ndarray:
        """Doubles in [0, 1)"""
        return self._generator.random(size)

    def normal(self, size) -> np.ndarray:
        """Standard Gaussians by Box-Muller"""
        shape = (size,) if isinstance(size, int) else tuple(size)
        count = int(np.prod(shape))
        pairs = (count + 1) // 2
        u = self.uniform(2 * pairs)
        radius = np.sqrt(-2.0 * np.log(1.0 - u[:pairs]))
        angle = 2.0 * np.pi * u[pairs:]
        z = np.concatenate([radius * np.cos(angle), radius * np.sin(angle)])
        return z[:count].reshape(shape)

    def symmetric_exponential(self, size) -> np.ndarray:
        """Laplace variables: a random sign times an Exp(1)"""
        shape = (size,) if isinstance(size, int) else tuple(size)
        u = self.uniform((2,) + shape)
        return np.where(u[0] < 0.5, -1.0, 1.0) * -np.log(1.0 - u[1])

    def index(self, count: int) -> int:
        """Uniform integer in 0..count-1"""
        return min(int(self.uniform(1)[0] * count), count - 1)

    # ----------------------------------------
    # point clouds
    # ----------------------------------------

    def points(self, dist: Distribution, n: int, d: int) -> np.ndarray:
        """n i.i.d. points of R^d from an exchangeable, symmetric law"""
        dist = Distribution(dist)
        if dist == Distribution.SYMM_EXP:
            return self.symmetric_exponential((n, d))
        pts = self.normal((n, d))
        if dist == Distribution.SPHERE:
            pts = pts / np.linalg.norm(pts, axis=1, keepdims=True)
        return pts


def freeze(values: np.ndarray, bits: Optional[int] = None) -> List[List[Fraction]]:
    """Round a float matrix onto the grid 2^-bits and return exact rationals"""
    bits = config.RATIONAL_BITS if bits is None else bits
    scale = 2 ** bits
    grid = np.rint(np.atleast_2d(values) * scale)
    return [[Fraction(int(x), scale) for x in row] for row in grid]


def gaussian_frame(stream: RandomStream, d: int, m: int, bits: Optional[int] = None) -> Tuple[np.ndarray, List[List[Fraction]]]:
    """A d x m Gaussian matrix and its frozen rational copy"""
    raw = stream.normal((d, m))
    return raw, freeze(raw, bits)
