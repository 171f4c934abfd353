"""
Pydantic data models
- families, Stirling kinds, sampling distributions, experiment quantities
- point configurations and combinatorial cone/face representatives
- Monte Carlo estimates, experiment specs and reports
- CLI configuration
"""
import math
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator, model_validator

from .formatting import rational_text
from .linalg import to_fraction


# ============================================================
# Tags
# ============================================================

class Family(str, Enum):
    A = 'A'
    B = 'B'
    GENERIC = 'Generic'


class StirlingKind(str, Enum):
    FIRST_A = 'FirstA'
    SECOND_A = 'SecondA'
    FIRST_B = 'FirstB'
    SECOND_B = 'SecondB'


class Distribution(str, Enum):
    GAUSSIAN = 'gaussian'
    SPHERE = 'sphere'
    SYMM_EXP = 'symm-exp'

    @classmethod
    def _missing_(cls, value):
        if value in ('symmetrized-exponential', 'symm_exp'):
            return cls.SYMM_EXP
        return None


class Quantity(str, Enum):
    FK = 'fk'
    YKJ = 'Ykj'
    UJ = 'Uj'
    VJ = 'vj'
    LAMBDA = 'lambda'
    DUAL_FK = 'dual_fk'
    ACCEPTANCE = 'acceptance'


def min_points(family: Family, d: int) -> int:
    """Smallest n for which the theorems of the family apply"""
    return d + 1 if Family(family) == Family.A else d


# ============================================================
# Point configurations
# ============================================================

class PointConfig(BaseModel):
    """Ordered points y_1..y_n in Q^d tagged with the Weyl family"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    family: Family
    d: int
    points: Tuple[Tuple[Fraction, ...], ...]

    @model_validator(mode='before')
    @classmethod
    def _infer_dimension(cls, data):
        if isinstance(data, dict) and data.get('d') is None and data.get('points'):
            data = dict(data)
            data['d'] = len(data['points'][0])
        return data

    @field_validator('points', mode='before')
    @classmethod
    def _parse_points(cls, value):
        return tuple(tuple(to_fraction(x) for x in row) for row in value)

    @model_validator(mode='after')
    def _check_shape(self):
        if self.family == Family.GENERIC:
            raise ValueError('point configurations are tagged A or B')
        if self.d < 2:
            raise ValueError(f'd must be at least 2, got {self.d}')
        for i, row in enumerate(self.points):
            if len(row) != self.d:
                raise ValueError(f'point {i + 1} has dimension {len(row)}, expected {self.d}')
        if self.n < min_points(self.family, self.d):
            raise ValueError(
                f'family {self.family.value} needs n >= {min_points(self.family, self.d)}, got n={self.n}'
            )
        return self

    @field_serializer('points')
    def _dump_points(self, points):
        return [[rational_text(x) for x in row] for row in points]

    @property
    def n(self) -> int:
        return len(self.points)


# ============================================================
# Combinatorial representatives
# ============================================================

class SignedOrdering(BaseModel):
    """(eps, sigma): the chain eps_1 f_sigma(1) <= ... (<= 0 for family B); indices are 0-based"""
    model_config = ConfigDict(frozen=True)

    sigma: Tuple[int, ...]
    eps: Tuple[int, ...]

    @model_validator(mode='after')
    def _check(self):
        if sorted(self.sigma) != list(range(len(self.sigma))):
            raise ValueError(f'sigma is not a permutation: {self.sigma}')
        if len(self.eps) != len(self.sigma) or any(e not in (1, -1) for e in self.eps):
            raise ValueError(f'eps must hold {len(self.sigma)} signs, got {self.eps}')
        return self

    @property
    def n(self) -> int:
        return len(self.sigma)

    def sort_key(self) -> Tuple:
        return (self.eps, self.sigma)


class FaceRep(BaseModel):
    """
    Face of a Weyl cone written as a chain with breaks.

    Positions 0..n-1 of (eps, sigma) are cut after l_1 < ... < l_m.
    Family A: groups are the n-d+k blocks between consecutive breaks.
    Family B: the first m groups are signed blocks, positions l_m..n-1 form the zero group.
    """
    model_config = ConfigDict(frozen=True)

    family: Family
    sigma: Tuple[int, ...]
    eps: Tuple[int, ...]
    breaks: Tuple[int, ...]

    @model_validator(mode='after')
    def _check(self):
        n = len(self.sigma)
        if sorted(self.sigma) != list(range(n)):
            raise ValueError(f'sigma is not a permutation: {self.sigma}')
        if len(self.eps) != n or any(e not in (1, -1) for e in self.eps):
            raise ValueError('eps must hold one sign per position')
        if any(b >= c for b, c in zip(self.breaks, self.breaks[1:])):
            raise ValueError(f'breaks must increase strictly: {self.breaks}')
        upper = n - 1 if self.family == Family.A else n
        if self.breaks and (self.breaks[0] < 1 or self.breaks[-1] > upper):
            raise ValueError(f'breaks out of range 1..{upper}: {self.breaks}')
        if self.family == Family.A and any(e != 1 for e in self.eps):
            raise ValueError('family A carries no signs')
        if self.family == Family.B and not self.breaks:
            raise ValueError('family B needs at least one break')
        return self

    @property
    def n(self) -> int:
        return len(self.sigma)

    def groups(self) -> List[Tuple[Tuple[int, int], ...]]:
        """Signed blocks ((index, sign), ...) in chain order, excluding the zero group"""
        cuts = list(self.breaks)
        if self.family == Family.A:
            cuts.append(self.n)
        out, start = [], 0
        for stop in cuts:
            out.append(tuple((self.sigma[p], self.eps[p]) for p in range(start, stop)))
            start = stop
        return out

    def zero_group(self) -> Tuple[int, ...]:
        if self.family == Family.A:
            return ()
        return tuple(self.sigma[self.breaks[-1]:])

    def key(self) -> Tuple:
        """Hashable identity of the face: the ordered (signed) partition plus the zero set"""
        blocks = tuple(frozenset(block) for block in self.groups())
        return (self.family.value, blocks, frozenset(self.zero_group()))

    def is_canonical(self) -> bool:
        """Indices sorted within each group, zero group signed +1"""
        start = 0
        for stop in list(self.breaks) + [self.n]:
            part = self.sigma[start:stop]
            if list(part) != sorted(part):
                return False
            start = stop
        return all(e == 1 for e in self.eps[self.breaks[-1]:]) if self.family == Family.B else True


class TessellationSummary(BaseModel):
    model_config = ConfigDict(frozen=True)

    family: Family
    n: int
    d: int
    cone_count: int
    face_counts: Dict[int, int] = {}
    incidence_sums: Dict[int, int] = {}

    @model_validator(mode='after')
    def _check(self):
        if self.d in self.face_counts and self.face_counts[self.d] != self.cone_count:
            raise ValueError('cone count must equal the number of d-faces')
        return self


# ============================================================
# Monte Carlo
# ============================================================

class RngSpec(BaseModel):
    """Key of one counter-based random stream; substreams extend the index path"""
    model_config = ConfigDict(frozen=True)

    seed: int = Field(ge=0, lt=2 ** 64)
    stream: int = Field(default=0, ge=0, lt=2 ** 64)
    path: Tuple[int, ...] = ()

    @field_validator('path')
    @classmethod
    def _check_path(cls, value):
        if any(i < 0 for i in value):
            raise ValueError(f'substream indices must be nonnegative, got {value}')
        return value

    def substream(self, index: int) -> 'RngSpec':
        """Child stream; distinct (stream, path) pairs never share a key"""
        return RngSpec(seed=self.seed, stream=self.stream, path=self.path + (index,))


class Estimate(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    mean: float
    stderr: float
    trials: int
    target: Optional[Fraction] = None
    z_score: Optional[float] = None

    @classmethod
    def from_samples(cls, values: List[float], target: Optional[Fraction] = None) -> 'Estimate':
        """Sample mean with standard error sd/sqrt(trials); sums are correctly rounded"""
        trials = len(values)
        if trials == 0:
            raise ValueError('an estimate needs at least one sample')
        mean = math.fsum(values) / trials
        if trials > 1:
            variance = math.fsum((v - mean) ** 2 for v in values) / (trials - 1)
            stderr = math.sqrt(variance / trials)
        else:
            stderr = 0.0
        return cls.with_target(mean, stderr, trials, target)

    @classmethod
    def with_target(cls, mean: float, stderr: float, trials: int,
                    target: Optional[Fraction] = None) -> 'Estimate':
        z_score = None
        if target is not None and stderr > 0:
            z_score = (mean - float(target)) / stderr
        return cls(mean=mean, stderr=stderr, trials=trials, target=target, z_score=z_score)

    def within(self, limit: float) -> bool:
        """Agreement with the target: |z| <= limit, or an exact hit when stderr vanishes"""
        if self.target is None:
            return True
        if self.z_score is None:
            return abs(self.mean - float(self.target)) <= 1e-12
        return abs(self.z_score) <= limit


class ExperimentSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    quantity: Quantity
    family: Family
    n: int
    d: int
    k: Optional[int] = None
    j: Optional[int] = None
    dist: Distribution = Distribution.GAUSSIAN
    trials: int = Field(gt=0)
    seed: int = Field(default=0, ge=0, lt=2 ** 64)
    inner_trials: int = Field(default=200, gt=0)

    @model_validator(mode='after')
    def _check(self):
        if self.family == Family.GENERIC:
            raise ValueError('experiments sample Weyl cones of family A or B')
        if self.d < 2 or self.n < min_points(self.family, self.d):
            raise ValueError(f'invalid (n, d) = ({self.n}, {self.d}) for family {self.family.value}')
        k, j, d = self.k, self.j, self.d
        q = self.quantity
        if q in (Quantity.FK, Quantity.LAMBDA) and not (k is not None and 1 <= k <= d):
            raise ValueError(f'{q.value} needs 1 <= k <= d')
        if q == Quantity.DUAL_FK and not (k is not None and 0 <= k <= d - 1):
            raise ValueError('dual_fk needs 0 <= k <= d-1')
        if q == Quantity.YKJ and not (k is not None and j is not None and 1 <= j <= k <= d):
            raise ValueError('Ykj needs 1 <= j <= k <= d')
        if q == Quantity.UJ and not (j is not None and 0 <= j <= d - 1):
            raise ValueError('Uj needs 0 <= j <= d-1')
        if q == Quantity.VJ and not (j is not None and 0 <= j <= d):
            raise ValueError('vj needs 0 <= j <= d')
        return self


class Report(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    schema_version: int = 1
    spec: ExperimentSpec
    estimate: Estimate
    passed: bool
    provenance: Dict[str, str] = {}


# ============================================================
# CLI
# ============================================================

class CliConfig(BaseModel):
    """Parsed flags of one CLI invocation, checked against the subcommand's preconditions"""
    model_config = ConfigDict(frozen=True)

    subcommand: str
    family: Optional[Family] = None
    n: Optional[int] = None
    d: Optional[int] = None
    k: Optional[int] = None
    j: Optional[int] = None
    dist: Distribution = Distribution.GAUSSIAN
    trials: int = Field(default=1000, gt=0)
    seed: int = Field(default=0, ge=0, lt=2 ** 64)
    seeds: int = Field(default=10, gt=0)
    threads: int = Field(default=1, gt=0)
    input: Optional[str] = None
    out: Optional[str] = None
    format: str = 'text'
    max_candidates: Optional[int] = None

    @model_validator(mode='after')
    def _check(self):
        # a point file replaces --family/--n/--d for the commands that read one
        needs_shape = {'tables', 'chamber-intersect'}
        if self.input is None:
            needs_shape |= {'verify', 'gp-check', 'export-sphere'}
        if self.subcommand in needs_shape:
            if self.family is None or self.n is None or self.d is None:
                raise ValueError(f'{self.subcommand} needs --family, --n and --d')
            if self.family == Family.GENERIC:
                if self.subcommand != 'tables' or self.n < 1 or self.d < 1:
                    raise ValueError('the Generic family is only tabulated')
            elif self.subcommand == 'chamber-intersect':
                if not 1 <= self.d <= self.n:
                    raise ValueError('chamber-intersect needs a subspace dimension 1 <= d <= n')
                if self.k is None or not 1 <= self.k <= self.n:
                    raise ValueError('chamber-intersect needs 1 <= k <= n')
            elif self.d < 2 or self.n < min_points(self.family, self.d):
                raise ValueError(
                    f'family {self.family.value} needs d >= 2 and n >= {min_points(self.family, self.d)}'
                )
        if self.subcommand == 'export-sphere' and self.d is not None and self.d != 3:
            raise ValueError('export-sphere draws on the 2-sphere and needs d = 3')
        if self.format not in ('text', 'json', 'csv'):
            raise ValueError(f'unknown format {self.format}')
        return self
