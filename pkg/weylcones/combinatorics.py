"""
Closed-form counts and expectations
- Stirling numbers [n,k], {n,k} and their B-analogues (memoized triangular tables)
- region counts C(n,d), D^A(n,d), D^B(n,d) and face counts
- expected face counts, size functionals, quermassintegrals, intrinsic volumes, angle sums
- the same for the dual cones, plus acceptance probabilities
- incidence sums and chamber/subspace intersection counts

Values for n below the theorem range (n < d+1 for A, n < d for B) are evaluated
formally; only in-range values are theorem-backed (see theorem_backed).
"""
import logging
import threading
from fractions import Fraction
from math import comb, factorial
from typing import Callable, Dict, List

from .errors import ParameterRangeError, UnsupportedFamilyError
from .models import Family, StirlingKind, TessellationSummary, min_points

logger = logging.getLogger(__name__)


# ============================================================
# Stirling tables
# ============================================================

class _TriangularTable:
    """Rows 0..N of a triangle built by a row recurrence; rows are extended under a lock"""

    def __init__(self, step: Callable[[List[int], int], List[int]]):
        self._rows: List[List[int]] = [[1]]
        self._step = step
        self._lock = threading.Lock()

    def value(self, n: int, k: int) -> int:
        if k < 0 or k > n:
            return 0
        rows = self._rows
        if n >= len(rows):
            with self._lock:
                while n >= len(self._rows):
                    prev = self._rows[-1]
                    # Publish a new list so readers never see a half-built row
                    self._rows = self._rows + [self._step(prev, len(self._rows))]
            rows = self._rows
        return rows[n][k]


def _extend(prev: List[int], n: int, weight: Callable[[int, int], int]) -> List[int]:
    """row[k] = prev[k-1] + weight(n, k) * prev[k]"""
    padded = prev + [0]
    return [(padded[k - 1] if k else 0) + weight(n, k) * padded[k] for k in range(n + 1)]


_FIRST_A = _TriangularTable(lambda prev, n: _extend(prev, n, lambda n, k: n - 1))
_FIRST_B = _TriangularTable(lambda prev, n: _extend(prev, n, lambda n, k: 2 * n - 1))
_SECOND_A = _TriangularTable(lambda prev, n: _extend(prev, n, lambda n, k: k))
_SECOND_B_RECURRENCE = _TriangularTable(lambda prev, n: _extend(prev, n, lambda n, k: 2 * k + 1))


def _second_b_sum(n: int, k: int) -> int:
    """B{n,k} = sum_r C(n,r) {r,k} 2^(r-k)"""
    if k < 0 or k > n:
        return 0
    return sum(comb(n, r) * _SECOND_A.value(r, k) * 2 ** (r - k) for r in range(k, n + 1))


def stirling(kind: StirlingKind, n: int, k: int) -> int:
    """
    Exact Stirling-type number.

    FirstA  [n,k]: coefficients of t(t+1)...(t+n-1)
    FirstB  B[n,k]: coefficients of (t+1)(t+3)...(t+2n-1)
    SecondA {n,k}: partitions of an n-set into k blocks
    SecondB B{n,k}: sum over r of C(n,r){r,k}2^(r-k)
    Out-of-range k gives 0.
    """
    if n < 0:
        raise ParameterRangeError(f'stirling needs n >= 0, got {n}')
    kind = StirlingKind(kind)
    if kind == StirlingKind.FIRST_A:
        return _FIRST_A.value(n, k)
    if kind == StirlingKind.FIRST_B:
        return _FIRST_B.value(n, k)
    if kind == StirlingKind.SECOND_A:
        return _SECOND_A.value(n, k)
    return _second_b_sum(n, k)


def stirling_second_b_recurrence(n: int, k: int) -> int:
    """B{n,k} via B{n,k} = B{n-1,k-1} + (2k+1) B{n-1,k}"""
    if n < 0:
        raise ParameterRangeError(f'stirling needs n >= 0, got {n}')
    return _SECOND_B_RECURRENCE.value(n, k)


def lattice_subspace_count(family: Family, n: int, k: int) -> int:
    """Number of k-dimensional lattice subspaces of the reflection arrangement in R^n"""
    family = _weyl(family)
    kind = StirlingKind.SECOND_A if family == Family.A else StirlingKind.SECOND_B
    return stirling(kind, n, k)


# ============================================================
# Region counts
# ============================================================

def _weyl(family) -> Family:
    family = Family(family)
    if family == Family.GENERIC:
        raise UnsupportedFamilyError('only defined for the Weyl families A and B')
    return family


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ParameterRangeError(message)


def schlaefli_count(n: int, d: int) -> int:
    """C(n,d) = 2 sum_{i<d} binom(n-1, i): regions of n hyperplanes in general position in R^d"""
    if n < 1 or d < 1:
        return 0
    return 2 * sum(comb(n - 1, i) for i in range(d))


def weyl_count(family: Family, n: int, d: int) -> int:
    """D(n,d) = 2([n,n-d+1] + [n,n-d+3] + ...), B-analogue with B[n,k]; no range checks"""
    family = _weyl(family)
    if n < 0:
        return 0
    kind = StirlingKind.FIRST_A if family == Family.A else StirlingKind.FIRST_B
    return 2 * sum(stirling(kind, n, i) for i in range(n - d + 1, n + 1, 2))


def _count(family: Family, n: int, d: int) -> int:
    return schlaefli_count(n, d) if Family(family) == Family.GENERIC else weyl_count(family, n, d)


def region_count(family: Family, n: int, d: int) -> int:
    """Number of cones: C(n,d), D^A(n,d) or D^B(n,d)"""
    _require(n >= 1 and d >= 1, f'region_count needs n, d >= 1, got n={n}, d={d}')
    return _count(family, n, d)


def theorem_backed(family: Family, n: int, d: int) -> bool:
    """True when (n, d) lies in the range where the closed forms are theorems"""
    family = Family(family)
    if family == Family.GENERIC:
        return n >= d >= 1
    return d >= 2 and n >= min_points(family, d)


def total_face_count(family: Family, n: int, d: int, k: int) -> int:
    """Number of k-faces of the tessellation: {n,n-d+k} D^A(n-d+k,k) resp. B{..} D^B(..)"""
    family = _weyl(family)
    _require(1 <= k <= d, f'total_face_count needs 1 <= k <= d, got k={k}, d={d}')
    m = n - d + k
    if m < 0:
        return 0
    return lattice_subspace_count(family, n, m) * weyl_count(family, m, k)


# ============================================================
# Expectations for Weyl random cones
# ============================================================

def _falling(n: int, m: int) -> int:
    """n!/m! for 0 <= m <= n"""
    return factorial(n) // factorial(m)


def _choice_weight(family: Family, n: int, r: int) -> int:
    """binom(n-1, r) for A, 2^r binom(n, r) for B"""
    if r < 0:
        return 0
    return comb(n - 1, r) if family == Family.A else 2 ** r * comb(n, r)


def expected_face_count(family: Family, n: int, d: int, k: int) -> Fraction:
    """E f_k of the Weyl random cone (A, B) or of the Cover-Efron cone S_n (Generic)"""
    family = Family(family)
    _require(1 <= k <= d, f'expected_face_count needs 1 <= k <= d, got k={k}, d={d}')
    m = n - d + k
    _require(m >= 0, f'n={n} too small for d={d}, k={k}')
    if family == Family.GENERIC:
        return Fraction(2 ** (d - k) * comb(n, d - k) * schlaefli_count(m, k), schlaefli_count(n, d))
    return Fraction(
        _choice_weight(family, n, d - k) * weyl_count(family, m, k) * _falling(n, m),
        weyl_count(family, n, d),
    )


def expected_size_functional(family: Family, n: int, d: int, k: int, j: int) -> Fraction:
    """E Y_{d-k+j, d-k}: expected sum of U_{d-k} over the (d-k+j)-faces"""
    family = Family(family)
    _require(1 <= j <= k <= d, f'expected_size_functional needs 1 <= j <= k <= d, got k={k}, j={j}')
    m = n - k + j
    if family == Family.GENERIC:
        _require(n > k - j, f'Generic size functionals need n > k-j, got n={n}')
        return Fraction(2 ** (k - j) * comb(n, k - j) * schlaefli_count(m, j), 2 * schlaefli_count(n, d))
    _require(m >= 0, f'n={n} too small for k={k}, j={j}')
    return Fraction(
        _choice_weight(family, n, k - j) * weyl_count(family, m, j) * _falling(n, m),
        2 * weyl_count(family, n, d),
    )


def expected_quermass(family: Family, n: int, d: int, j: int) -> Fraction:
    """E U_j = D(n, d-j) / (2 D(n,d))"""
    family = _weyl(family)
    _require(0 <= j <= d - 1, f'expected_quermass needs 0 <= j <= d-1, got j={j}, d={d}')
    return Fraction(weyl_count(family, n, d - j), 2 * weyl_count(family, n, d))


def _first_kind(family: Family) -> StirlingKind:
    return StirlingKind.FIRST_A if family == Family.A else StirlingKind.FIRST_B


def expected_intrinsic_volume(family: Family, n: int, d: int, j: int) -> Fraction:
    """E v_j = [n, n-d+j] / D(n,d) for j >= 1; the apex term closes the sum to one"""
    family = _weyl(family)
    _require(0 <= j <= d, f'expected_intrinsic_volume needs 0 <= j <= d, got j={j}, d={d}')
    total = weyl_count(family, n, d)
    if j == 0:
        return Fraction(total - weyl_count(family, n, d - 1), 2 * total)
    return Fraction(stirling(_first_kind(family), n, n - d + j), total)


def expected_angle_sum(family: Family, n: int, d: int, k: int) -> Fraction:
    """E Lambda_k: expected sum of solid angles of the k-faces"""
    family = _weyl(family)
    _require(1 <= k <= d, f'expected_angle_sum needs 1 <= k <= d, got k={k}, d={d}')
    m = n - d + k
    _require(m >= 0, f'n={n} too small for d={d}, k={k}')
    return Fraction(_choice_weight(family, n, d - k) * _falling(n, m), weyl_count(family, n, d))


# ============================================================
# Dual cones
# ============================================================

def expected_dual_face_count(family: Family, n: int, d: int, k: int) -> Fraction:
    """E f_k of the dual Weyl cone (Generic: Cover-Efron cone C_n via f_k(C) = f_{d-k}(C°))"""
    family = Family(family)
    _require(0 <= k <= d - 1, f'expected_dual_face_count needs 0 <= k <= d-1, got k={k}, d={d}')
    if family == Family.GENERIC:
        return expected_face_count(family, n, d, d - k)
    _require(n >= k, f'n={n} too small for k={k}')
    return Fraction(
        _choice_weight(family, n, k) * weyl_count(family, n - k, d - k) * _falling(n, n - k),
        weyl_count(family, n, d),
    )


def expected_dual_quermass(family: Family, n: int, d: int, j: int) -> Fraction:
    """E U_j(C) = (D(n,d) - D(n,j)) / (2 D(n,d))"""
    family = _weyl(family)
    _require(1 <= j <= d, f'expected_dual_quermass needs 1 <= j <= d, got j={j}, d={d}')
    total = weyl_count(family, n, d)
    return Fraction(total - weyl_count(family, n, j), 2 * total)


def expected_dual_intrinsic_volume(family: Family, n: int, d: int, j: int) -> Fraction:
    """E v_j(C) = [n, n-j] / D(n,d) for j < d; the top term is (D(n,d) - D(n,d-1)) / (2 D(n,d))"""
    family = _weyl(family)
    _require(0 <= j <= d, f'expected_dual_intrinsic_volume needs 0 <= j <= d, got j={j}, d={d}')
    total = weyl_count(family, n, d)
    if j == d:
        return Fraction(total - weyl_count(family, n, d - 1), 2 * total)
    return Fraction(stirling(_first_kind(family), n, n - j), total)


def acceptance_probability(family: Family, n: int, d: int) -> Fraction:
    """Probability that the positive hull of the chain generators is not all of R^d"""
    family = _weyl(family)
    _require(n >= 1 and d >= 1, f'acceptance_probability needs n, d >= 1, got n={n}, d={d}')
    orderings = factorial(n) if family == Family.A else 2 ** n * factorial(n)
    return Fraction(weyl_count(family, n, d), orderings)


# ============================================================
# Incidences and chamber intersections
# ============================================================

def expected_incidence_sum(family: Family, n: int, d: int, k: int) -> int:
    """Number of pairs (cone, k-face of the cone) in the tessellation"""
    family = _weyl(family)
    _require(1 <= k <= d, f'expected_incidence_sum needs 1 <= k <= d, got k={k}, d={d}')
    m = n - d + k
    _require(m >= 0, f'n={n} too small for d={d}, k={k}')
    return _choice_weight(family, n, d - k) * _falling(n, m) * weyl_count(family, m, k)


def expected_summary(family: Family, n: int, d: int) -> TessellationSummary:
    """Cone count, k-face counts and incidence sums the enumeration must reproduce"""
    family = _weyl(family)
    return TessellationSummary(
        family=family, n=n, d=d,
        cone_count=region_count(family, n, d),
        face_counts={k: total_face_count(family, n, d, k) for k in range(1, d + 1)},
        incidence_sums={k: expected_incidence_sum(family, n, d, k) for k in range(1, d + 1)},
    )


def chamber_face_census(family: Family, n: int, k: int) -> int:
    """Pairs (Weyl chamber, k-face of it) in R^n"""
    family = _weyl(family)
    _require(1 <= k <= n, f'chamber_face_census needs 1 <= k <= n, got k={k}')
    if family == Family.A:
        return factorial(n) * comb(n - 1, k - 1)
    return 2 ** n * factorial(n) * comb(n, k)


def chamber_intersection_count(family: Family, n: int, d: int, k: int) -> int:
    """
    Pairs (chamber, k-face) whose face meets a generic d-dimensional subspace of R^n nontrivially.

    B: 2^(n-k) binom(n,k) n!/k! D^B(k, d-n+k)
    A: n!/k! binom(n-1,k-1) D^A(k, d-n+k)
    """
    family = _weyl(family)
    _require(1 <= k <= n, f'chamber_intersection_count needs 1 <= k <= n, got k={k}')
    _require(1 <= d <= n, f'chamber_intersection_count needs 1 <= d <= n, got d={d}')
    if family == Family.A:
        return _falling(n, k) * comb(n - 1, k - 1) * weyl_count(family, k, d - n + k)
    return 2 ** (n - k) * comb(n, k) * _falling(n, k) * weyl_count(family, k, d - n + k)


def formula_table(family: Family, n: int, d: int) -> Dict[str, object]:
    """Every closed form for one (family, n, d), keyed by a short label"""
    family = Family(family)
    table: Dict[str, object] = {'cones': region_count(family, n, d)}
    if family == Family.GENERIC:
        for k in range(1, d + 1):
            table[f'E f_{k}'] = expected_face_count(family, n, d, k)
        for k in range(0, d):
            table[f'E dual f_{k}'] = expected_dual_face_count(family, n, d, k)
        for k in range(1, d + 1):
            for j in range(1, k + 1):
                if n > k - j:
                    table[f'E Y_{d - k + j},{d - k}'] = expected_size_functional(family, n, d, k, j)
        return table
    for k in range(1, d + 1):
        table[f'faces_{k}'] = total_face_count(family, n, d, k)
    for k in range(1, d + 1):
        table[f'incidences_{k}'] = expected_incidence_sum(family, n, d, k)
    for k in range(1, d + 1):
        table[f'E f_{k}'] = expected_face_count(family, n, d, k)
    for k in range(1, d + 1):
        for j in range(1, k + 1):
            table[f'E Y_{d - k + j},{d - k}'] = expected_size_functional(family, n, d, k, j)
    for j in range(0, d):
        table[f'E U_{j}'] = expected_quermass(family, n, d, j)
    for j in range(0, d + 1):
        table[f'E v_{j}'] = expected_intrinsic_volume(family, n, d, j)
    for k in range(1, d + 1):
        table[f'E Lambda_{k}'] = expected_angle_sum(family, n, d, k)
    for k in range(0, d):
        table[f'E dual f_{k}'] = expected_dual_face_count(family, n, d, k)
    for j in range(1, d + 1):
        table[f'E dual U_{j}'] = expected_dual_quermass(family, n, d, j)
    for j in range(0, d + 1):
        table[f'E dual v_{j}'] = expected_dual_intrinsic_volume(family, n, d, j)
    table['acceptance'] = acceptance_probability(family, n, d)
    return table
