"""
Exact rational linear algebra
- RationalMatrix: immutable matrix of Fractions
- rank, kernel basis, subspace intersection dimension
- homogeneous strict feasibility via a phase-1 simplex (Bland's rule)
"""
import logging
from fractions import Fraction
from math import gcd
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import DimensionMismatchError

logger = logging.getLogger(__name__)

ZERO = Fraction(0)
ONE = Fraction(1)


def to_fraction(value) -> Fraction:
    """int, Fraction, decimal or 'p/q' string -> Fraction; floats convert exactly (dyadic)"""
    if isinstance(value, bool):
        raise TypeError('booleans are not numbers here')
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, (float, np.floating)):
        if not np.isfinite(value):
            raise ValueError(f'non-finite coordinate {value}')
        return Fraction(float(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f'cannot read {value!r} as a rational')


# ============================================================
# RationalMatrix
# ============================================================

class RationalMatrix:
    """Row-major matrix of Fractions with fixed shape"""

    __slots__ = ('_entries', '_cols')

    def __init__(self, entries: Iterable[Iterable], cols: Optional[int] = None):
        data = tuple(tuple(to_fraction(x) for x in row) for row in entries)
        if cols is None:
            if not data:
                raise ValueError('an empty matrix needs an explicit column count')
            cols = len(data[0])
        for row in data:
            if len(row) != cols:
                raise DimensionMismatchError(f'row of length {len(row)} in a matrix with {cols} columns')
        self._entries = data
        self._cols = cols

    # ----------------------------------------
    # construction helpers
    # ----------------------------------------

    @classmethod
    def _trusted(cls, entries: Tuple[Tuple[Fraction, ...], ...], cols: int) -> 'RationalMatrix':
        obj = cls.__new__(cls)
        obj._entries = entries
        obj._cols = cols
        return obj

    @classmethod
    def empty(cls, cols: int) -> 'RationalMatrix':
        return cls._trusted((), cols)

    @classmethod
    def identity(cls, size: int) -> 'RationalMatrix':
        return cls._trusted(
            tuple(tuple(ONE if i == j else ZERO for j in range(size)) for i in range(size)), size
        )

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], dim: int) -> 'RationalMatrix':
        """Matrix whose columns are the given vectors of length dim"""
        columns = [tuple(to_fraction(x) for x in col) for col in columns]
        for col in columns:
            if len(col) != dim:
                raise DimensionMismatchError(f'column of length {len(col)}, expected {dim}')
        return cls._trusted(tuple(tuple(col[i] for col in columns) for i in range(dim)), len(columns))

    # ----------------------------------------
    # shape and access
    # ----------------------------------------

    @property
    def rows(self) -> int:
        return len(self._entries)

    @property
    def cols(self) -> int:
        return self._cols

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self._cols)

    @property
    def entries(self) -> Tuple[Tuple[Fraction, ...], ...]:
        return self._entries

    def row(self, i: int) -> Tuple[Fraction, ...]:
        return self._entries[i]

    def column(self, j: int) -> Tuple[Fraction, ...]:
        return tuple(row[j] for row in self._entries)

    def columns(self) -> List[Tuple[Fraction, ...]]:
        return [self.column(j) for j in range(self._cols)]

    def __iter__(self):
        return iter(self._entries)

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalMatrix) and self.shape == other.shape and self._entries == other._entries

    def __hash__(self) -> int:
        return hash((self._cols, self._entries))

    def __repr__(self) -> str:
        body = '; '.join(' '.join(str(x) for x in row) for row in self._entries)
        return f'RationalMatrix({self.rows}x{self._cols}: [{body}])'

    # ----------------------------------------
    # algebra
    # ----------------------------------------

    def transpose(self) -> 'RationalMatrix':
        return RationalMatrix._trusted(
            tuple(tuple(row[j] for row in self._entries) for j in range(self._cols)), self.rows
        )

    def __matmul__(self, other):
        if isinstance(other, RationalMatrix):
            if self._cols != other.rows:
                raise DimensionMismatchError(f'cannot multiply {self.shape} by {other.shape}')
            cols = other.columns()
            return RationalMatrix._trusted(
                tuple(tuple(sum((a * b for a, b in zip(row, col)), ZERO) for col in cols)
                      for row in self._entries),
                other.cols,
            )
        vector = tuple(to_fraction(x) for x in other)
        if len(vector) != self._cols:
            raise DimensionMismatchError(f'vector of length {len(vector)} against {self._cols} columns')
        return tuple(sum((a * b for a, b in zip(row, vector)), ZERO) for row in self._entries)

    def vstack(self, *others: 'RationalMatrix') -> 'RationalMatrix':
        entries = list(self._entries)
        for other in others:
            if other.cols != self._cols:
                raise DimensionMismatchError(f'cannot stack {other.shape} under {self.shape}')
            entries.extend(other.entries)
        return RationalMatrix._trusted(tuple(entries), self._cols)

    def hstack(self, *others: 'RationalMatrix') -> 'RationalMatrix':
        for other in others:
            if other.rows != self.rows:
                raise DimensionMismatchError(f'cannot place {other.shape} beside {self.shape}')
        entries = tuple(
            row + sum((other.row(i) for other in others), ()) for i, row in enumerate(self._entries)
        )
        return RationalMatrix._trusted(entries, self._cols + sum(o.cols for o in others))

    def select_rows(self, indices: Iterable[int]) -> 'RationalMatrix':
        return RationalMatrix._trusted(tuple(self._entries[i] for i in indices), self._cols)

    def negate(self) -> 'RationalMatrix':
        return RationalMatrix._trusted(tuple(tuple(-x for x in row) for row in self._entries), self._cols)

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self._entries], dtype=float).reshape(self.shape)


# ============================================================
# Elimination
# ============================================================

def _rref(entries: Sequence[Sequence[Fraction]], ncols: int) -> Tuple[List[List[Fraction]], List[int]]:
    """Reduced row echelon form and pivot columns"""
    rows = [list(r) for r in entries]
    pivots: List[int] = []
    lead = 0
    for col in range(ncols):
        pivot = next((i for i in range(lead, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[lead], rows[pivot] = rows[pivot], rows[lead]
        p = rows[lead][col]
        rows[lead] = [x / p for x in rows[lead]]
        base = rows[lead]
        for i in range(len(rows)):
            if i != lead and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], base)]
        pivots.append(col)
        lead += 1
        if lead == len(rows):
            break
    return rows[:lead], pivots


def rank(M: RationalMatrix) -> int:
    """Exact rank by rational Gaussian elimination"""
    if M.rows == 0 or M.cols == 0:
        return 0
    return len(_rref(M.entries, M.cols)[1])


def _primitive(vector: List[Fraction]) -> List[Fraction]:
    """Scale to coprime integers, keeping the direction"""
    denom = 1
    for x in vector:
        denom = denom * x.denominator // gcd(denom, x.denominator)
    ints = [int(x * denom) for x in vector]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return [Fraction(x // g) for x in ints] if g else [Fraction(x) for x in ints]


def kernel_basis(M: RationalMatrix) -> RationalMatrix:
    """Columns spanning {v : M v = 0}; zero columns when the kernel is trivial"""
    n = M.cols
    if M.rows == 0:
        return RationalMatrix.identity(n)
    reduced, pivots = _rref(M.entries, n)
    pivot_set = set(pivots)
    basis = []
    for free in (c for c in range(n) if c not in pivot_set):
        v = [ZERO] * n
        v[free] = ONE
        for row, p in zip(reduced, pivots):
            v[p] = -row[free]
        basis.append(_primitive(v))
    return RationalMatrix.from_columns(basis, n)


def intersection_dim(U: RationalMatrix, V: RationalMatrix) -> int:
    """dim(span U ∩ span V) = dim U + dim V - rank[U|V]"""
    if U.rows != V.rows:
        raise DimensionMismatchError(f'subspaces of R^{U.rows} and R^{V.rows}')
    return rank(U) + rank(V) - rank(U.hstack(V))


# ============================================================
# Feasibility
# ============================================================

def _phase_one(A: List[List[Fraction]], b: List[Fraction]) -> bool:
    """
    Decide whether {x >= 0 : A x = b} is nonempty.

    Minimizes the sum of artificial variables with Bland's rule; artificial
    columns are dropped once they leave the basis.
    """
    if not A:
        return True
    n = len(A[0])
    tableau = []
    for row, rhs in zip(A, b):
        if rhs < 0:
            row, rhs = [-x for x in row], -rhs
        tableau.append(list(row) + [rhs])
    m = len(tableau)
    basis = [n + i for i in range(m)]
    cost = [-sum((r[j] for r in tableau), ZERO) for j in range(n)]
    value = sum((r[-1] for r in tableau), ZERO)

    while value > 0:
        entering = next((j for j in range(n) if cost[j] < 0), None)
        if entering is None:
            return False
        leave, best = None, None
        for i, r in enumerate(tableau):
            a = r[entering]
            if a > 0:
                ratio = r[-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        # A column with negative reduced cost always has a positive entry here
        prow = tableau[leave]
        a = prow[entering]
        prow = [x / a for x in prow]
        tableau[leave] = prow
        for i in range(m):
            f = tableau[i][entering]
            if i != leave and f != 0:
                tableau[i] = [x - f * y for x, y in zip(tableau[i], prow)]
        f = cost[entering]
        cost = [c - f * y for c, y in zip(cost, prow)]
        value += f * prow[-1]
        basis[leave] = entering
    return True


def feasible_strict(E: RationalMatrix, S: RationalMatrix, W: Optional[RationalMatrix] = None) -> bool:
    """
    True iff some v has E v = 0, S v > 0 and W v >= 0 (componentwise).

    Solved homogeneously as S v >= 1 after restricting v to ker E.
    """
    if S.rows == 0:
        raise ValueError('feasible_strict needs at least one strict row')
    if E.cols != S.cols or (W is not None and W.cols != S.cols):
        raise DimensionMismatchError('equality, strict and weak rows disagree on the ambient dimension')
    if W is None:
        W = RationalMatrix.empty(S.cols)
    if E.rows:
        N = kernel_basis(E)
        if N.cols == 0:
            return False
        S, W = S @ N, W @ N
    if any(all(x == 0 for x in row) for row in S):
        return False

    q = S.cols
    A: List[List[Fraction]] = []
    b: List[Fraction] = []
    slack_count = S.rows + W.rows
    for i, row in enumerate(list(S) + list(W)):
        slack = [ZERO] * slack_count
        slack[i] = -ONE
        A.append(list(row) + [-x for x in row] + slack)
        b.append(ONE if i < S.rows else ZERO)
    feasible = _phase_one(A, b)
    logger.debug('strict feasibility in %d variables, %d rows: %s', q, slack_count, feasible)
    return feasible


def strictly_positive_dependence(M: RationalMatrix) -> bool:
    """True iff some lambda with every lambda_i >= 1 has lambda^T M = 0"""
    if M.rows == 0:
        return False
    # lambda = 1 + mu with mu >= 0
    A = [list(M.column(j)) for j in range(M.cols)]
    b = [-sum(col, ZERO) for col in A]
    return _phase_one(A, b)
