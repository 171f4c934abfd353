"""
Weyl tessellations W^A(y_1..y_n) and W^B(y_1..y_n)
- hyperplane arrangement and the two general-position checks
- cones: exhaustive enumeration over signed orderings, adjacency walk
- k-faces: canonical representatives from ordered (signed) partitions
- multiplicities, incidence sums, per-cone face census, summaries
"""
import logging
from collections import Counter, deque
from fractions import Fraction
from functools import partial
from itertools import combinations, permutations, product
from math import factorial
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from . import config
from .cones import ConeH
from .errors import GeneralPositionError, ResourceBudgetError, VerificationMismatch
from .linalg import RationalMatrix, feasible_strict, intersection_dim, rank
from .models import Family, FaceRep, PointConfig, SignedOrdering, TessellationSummary
from .workers import parallel_map

logger = logging.getLogger(__name__)

Vector = Tuple[Fraction, ...]


# ============================================================
# Budget
# ============================================================

def candidate_count(family: Family, n: int) -> int:
    """Number of signed orderings: n! for A, 2^n n! for B"""
    return factorial(n) if Family(family) == Family.A else 2 ** n * factorial(n)


def check_budget(family: Family, n: int, max_candidates: Optional[int] = None) -> None:
    """Raise ResourceBudgetError when enumerating over n points is out of budget"""
    family = Family(family)
    candidates = candidate_count(family, n)
    if candidates > config.HARD_CAP:
        raise ResourceBudgetError(
            f'{candidates} candidate cones exceed the hard cap of {config.HARD_CAP}'
        )
    if max_candidates is not None:
        if candidates > max_candidates:
            raise ResourceBudgetError(f'{candidates} candidate cones exceed --max-candidates={max_candidates}')
        return
    cap = config.BUDGET_CONFIG[family.value]
    if n > cap:
        raise ResourceBudgetError(f'family {family.value} is enumerated up to n={cap}, got n={n}')


# ============================================================
# Arrangement
# ============================================================

def _combine(a: Vector, sa: int, b: Vector, sb: int) -> Vector:
    """sa*a - sb*b"""
    return tuple(sa * x - sb * y for x, y in zip(a, b))


def _proportional(u: Vector, v: Vector) -> bool:
    return rank(RationalMatrix([u, v])) < 2


def points_matrix(cfg: PointConfig) -> RationalMatrix:
    """n x d matrix with the points as rows; its column span is L-perp"""
    return RationalMatrix(cfg.points, cfg.d)


def build_arrangement(cfg: PointConfig) -> List[Vector]:
    """Normals y_i - y_j (and y_i + y_j, y_i for family B), pairwise non-proportional"""
    y = cfg.points
    normals: List[Vector] = []
    for i, j in combinations(range(cfg.n), 2):
        normals.append(_combine(y[i], 1, y[j], 1))
        if cfg.family == Family.B:
            normals.append(_combine(y[i], 1, y[j], -1))
    if cfg.family == Family.B:
        normals.extend(y)
    for a, normal in enumerate(normals):
        if all(x == 0 for x in normal):
            raise GeneralPositionError(f'zero normal in the arrangement (entry {a})')
    for a, b in combinations(range(len(normals)), 2):
        if _proportional(normals[a], normals[b]):
            raise GeneralPositionError(f'normals {a} and {b} of the arrangement are proportional')
    return normals


def chain_rows(cfg: PointConfig, ordering: SignedOrdering) -> List[Vector]:
    """Rows r with <r, v> <= 0 describing D_(eps,sigma): consecutive chain differences (+ last point for B)"""
    y, s, e = cfg.points, ordering.sigma, ordering.eps
    rows = [_combine(y[s[i]], e[i], y[s[i + 1]], e[i + 1]) for i in range(cfg.n - 1)]
    if cfg.family == Family.B:
        rows.append(tuple(e[-1] * x for x in y[s[-1]]))
    return rows


# ============================================================
# General position
# ============================================================

def _orderings(family: Family, n: int, fix_first_sign: bool = False) -> Iterator[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """(eps, sigma) in lexicographic order"""
    if Family(family) == Family.A:
        signs: Iterator[Tuple[int, ...]] = iter([(1,) * n])
    elif fix_first_sign:
        signs = ((1,) + rest for rest in product((-1, 1), repeat=n - 1))
    else:
        signs = product((-1, 1), repeat=n)
    for eps in signs:
        for sigma in permutations(range(n)):
            yield eps, sigma


def check_gp_chainwise(cfg: PointConfig) -> bool:
    """Every d chain vectors along every signed ordering are linearly independent"""
    n, d = cfg.n, cfg.d
    y = cfg.points
    verdicts: Dict[frozenset, bool] = {}
    # Flipping every sign flips every chain vector, so eps_1 = +1 suffices
    for eps, sigma in _orderings(cfg.family, n, fix_first_sign=True):
        keys = []
        vectors = []
        for i in range(n - 1):
            a, b = sigma[i], sigma[i + 1]
            keys.append((min(a, b), max(a, b), eps[i] * eps[i + 1]))
            vectors.append(_combine(y[a], eps[i], y[b], eps[i + 1]))
        if cfg.family == Family.B:
            keys.append((sigma[-1], sigma[-1], 0))
            vectors.append(y[sigma[-1]])
        for subset in combinations(range(len(vectors)), d):
            key = frozenset(keys[i] for i in subset)
            if key not in verdicts:
                verdicts[key] = len(key) == d and rank(RationalMatrix([vectors[i] for i in subset])) == d
            if not verdicts[key]:
                logger.info('chain vectors %s of ordering eps=%s sigma=%s are dependent',
                            sorted(key), eps, sigma)
                return False
    return True


def _set_partitions(items: Sequence[int]) -> Iterator[List[List[int]]]:
    """Set partitions, blocks listed by their smallest element"""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for partition in _set_partitions(rest):
        yield [[first]] + partition
        for i in range(len(partition)):
            yield partition[:i] + [[first] + partition[i]] + partition[i + 1:]


def _partitions_into(items: Sequence[int], blocks: int) -> Iterator[List[List[int]]]:
    for partition in _set_partitions(list(items)):
        if len(partition) == blocks:
            yield [sorted(block) for block in sorted(partition, key=min)]


def lattice_subspaces(family: Family, n: int) -> Iterator[Tuple[Tuple, RationalMatrix]]:
    """
    Nonzero subspaces of the intersection lattice of the reflection arrangement in R^n.

    A: beta constant on the blocks of a set partition.
    B: beta zero on a set Z and equal to +-t on each signed block of a partition of the rest.
    Yields (key, basis) with one basis column per block.
    """
    family = Family(family)
    everything = list(range(n))
    zero_sets: Iterator[Tuple[int, ...]] = iter([()])
    if family == Family.B:
        zero_sets = (z for r in range(n) for z in combinations(everything, r))
    for zero in zero_sets:
        rest = [i for i in everything if i not in zero]
        for partition in _set_partitions(rest):
            block_signs = [[(1,)] if family == Family.A else
                           [(1,) + tail for tail in product((1, -1), repeat=len(b) - 1)]
                           for b in partition]
            for choice in product(*block_signs):
                columns = []
                key_blocks = []
                for block, signs in zip(partition, choice):
                    sign_of = dict(zip(block, signs if family == Family.B else (1,) * len(block)))
                    columns.append([sign_of.get(i, 0) for i in everything])
                    key_blocks.append(frozenset(sign_of.items()))
                yield (frozenset(key_blocks), frozenset(zero)), RationalMatrix.from_columns(columns, n)


def check_gp_lattice(cfg: PointConfig) -> bool:
    """dim L-perp = d and every lattice subspace K meets L-perp in dimension max(0, d - n + dim K)"""
    n, d = cfg.n, cfg.d
    P = points_matrix(cfg)
    if rank(P) != d:
        logger.info('points span a space of dimension %d < %d', rank(P), d)
        return False
    for key, K in lattice_subspaces(cfg.family, n):
        expected = max(0, d - n + K.cols)
        if intersection_dim(K, P) != expected:
            logger.info('lattice subspace %s meets L-perp in the wrong dimension', key)
            return False
    return True


def _require_gp(cfg: PointConfig) -> None:
    if not check_gp_lattice(cfg):
        raise GeneralPositionError(f'{cfg.family.value} configuration with n={cfg.n}, d={cfg.d} is degenerate')


# ============================================================
# Cones
# ============================================================

def cone_of(cfg: PointConfig, ordering: SignedOrdering) -> ConeH:
    """D_(eps,sigma) as an H-representation"""
    return ConeH(ambient_dim=cfg.d, eq_rows=RationalMatrix.empty(cfg.d),
                 ineq_rows=RationalMatrix(chain_rows(cfg, ordering), cfg.d))


def _cone_nontrivial(cfg: PointConfig, candidate: Tuple[Tuple[int, ...], Tuple[int, ...]]) -> bool:
    eps, sigma = candidate
    rows = chain_rows(cfg, SignedOrdering(sigma=sigma, eps=eps))
    return feasible_strict(RationalMatrix.empty(cfg.d), RationalMatrix(rows, cfg.d).negate())


def enumerate_cones(cfg: PointConfig, threads: Optional[int] = None, max_candidates: Optional[int] = None,
                    verify_gp: bool = True) -> List[SignedOrdering]:
    """Signed orderings whose cone is not {0}, in lexicographic (eps, sigma) order"""
    check_budget(cfg.family, cfg.n, max_candidates)
    if verify_gp:
        _require_gp(cfg)
    candidates = list(_orderings(cfg.family, cfg.n))
    logger.info('testing %d candidate cones (family %s, n=%d, d=%d)', len(candidates), cfg.family.value, cfg.n, cfg.d)
    verdicts = parallel_map(partial(_cone_nontrivial, cfg), candidates, threads)
    cones = [SignedOrdering(sigma=sigma, eps=eps) for (eps, sigma), ok in zip(candidates, verdicts) if ok]
    logger.info('found %d cones', len(cones))
    return cones


def _generic_direction(cfg: PointConfig) -> Vector:
    """A rational v off every hyperplane of the arrangement (moment curve search)"""
    normals = build_arrangement(cfg)
    for t in range(2, 10_000):
        v = tuple(Fraction(t) ** i for i in range(cfg.d))
        if all(sum(a * b for a, b in zip(normal, v)) != 0 for normal in normals):
            return v
    raise GeneralPositionError('no generic direction found on the moment curve')


def _swap(sigma: Tuple[int, ...], eps: Tuple[int, ...], p: int):
    s, e = list(sigma), list(eps)
    s[p], s[p + 1] = s[p + 1], s[p]
    e[p], e[p + 1] = e[p + 1], e[p]
    return tuple(e), tuple(s)


def walk_cones(cfg: PointConfig, verify_gp: bool = True) -> List[SignedOrdering]:
    """
    Cones reached by walking across walls from the cone of a generic direction.

    Crossing a wall swaps two adjacent chain positions or, for family B, flips the
    sign of the last position. Returns the same list as enumerate_cones.
    """
    if verify_gp:
        _require_gp(cfg)
    v = _generic_direction(cfg)
    values = [sum(a * b for a, b in zip(y, v)) for y in cfg.points]
    if cfg.family == Family.A:
        eps = (1,) * cfg.n
    else:
        eps_of = [-1 if f > 0 else 1 for f in values]
        values = [e * f for e, f in zip(eps_of, values)]
    sigma = tuple(sorted(range(cfg.n), key=lambda i: values[i]))
    if cfg.family == Family.B:
        eps = tuple(eps_of[i] for i in sigma)
    start = (eps, sigma)
    seen = {start: True}
    queue = deque([start])
    while queue:
        eps, sigma = queue.popleft()
        neighbours = [_swap(sigma, eps, p) for p in range(cfg.n - 1)]
        if cfg.family == Family.B:
            neighbours.append((eps[:-1] + (-eps[-1],), sigma))
        for candidate in neighbours:
            if candidate in seen:
                continue
            seen[candidate] = _cone_nontrivial(cfg, candidate)
            if seen[candidate]:
                queue.append(candidate)
    cones = sorted(c for c, ok in seen.items() if ok)
    logger.info('walk visited %d orderings, %d cones', len(seen), len(cones))
    return [SignedOrdering(sigma=sigma, eps=eps) for eps, sigma in cones]


# ============================================================
# Faces
# ============================================================

def chain_cone(vectors: Sequence[Vector], rep: FaceRep, ambient_dim: int) -> ConeH:
    """
    Cone of a chain with breaks over the given vectors.

    Within a group consecutive entries are equal, consecutive groups are ordered
    by <=, and for family B the chain ends with <= 0 followed by the zero group.
    """
    eq: List[Vector] = []
    ineq: List[Vector] = []
    groups = rep.groups()
    for g, group in enumerate(groups):
        for (a, sa), (b, sb) in zip(group, group[1:]):
            eq.append(_combine(vectors[a], sa, vectors[b], sb))
        if g + 1 < len(groups):
            (a, sa), (b, sb) = group[-1], groups[g + 1][0]
            ineq.append(_combine(vectors[a], sa, vectors[b], sb))
    if rep.family == Family.B:
        a, sa = groups[-1][-1]
        ineq.append(tuple(sa * x for x in vectors[a]))
        eq.extend(vectors[z] for z in rep.zero_group())
    return ConeH(ambient_dim=ambient_dim, eq_rows=RationalMatrix(eq, ambient_dim),
                 ineq_rows=RationalMatrix(ineq, ambient_dim))


def face_cone(cfg: PointConfig, rep: FaceRep) -> ConeH:
    """H-representation of the face described by rep"""
    return chain_cone(cfg.points, rep, cfg.d)


def _face_nontrivial(cfg: PointConfig, rep: FaceRep) -> bool:
    cone = face_cone(cfg, rep)
    return feasible_strict(cone.eq_rows, cone.ineq_rows.negate())


def canonical(rep: FaceRep) -> FaceRep:
    """Sort indices inside each group; the zero group gets sign +1"""
    sigma, eps = [], []
    start = 0
    for stop in list(rep.breaks) + [rep.n]:
        part = sorted(zip(rep.sigma[start:stop], rep.eps[start:stop]))
        sigma.extend(i for i, _ in part)
        eps.extend(e for _, e in part)
        start = stop
    if rep.family == Family.B:
        zero_start = rep.breaks[-1]
        eps[zero_start:] = [1] * (rep.n - zero_start)
    return FaceRep(family=rep.family, sigma=tuple(sigma), eps=tuple(eps), breaks=rep.breaks)


def _rep_from_blocks(family: Family, blocks: Sequence[Sequence[Tuple[int, int]]], zero: Sequence[int]) -> FaceRep:
    sigma, eps, breaks = [], [], []
    for block in blocks:
        for i, e in block:
            sigma.append(i)
            eps.append(e)
        breaks.append(len(sigma))
    if family == Family.A:
        breaks.pop()
    sigma.extend(zero)
    eps.extend([1] * len(zero))
    return FaceRep(family=family, sigma=tuple(sigma), eps=tuple(eps), breaks=tuple(breaks))


def chain_reps(family: Family, n: int, blocks: int) -> Iterator[FaceRep]:
    """
    Canonical chains with the given number of nonzero groups.

    A: ordered set partitions of {0..n-1}.
    B: a zero set plus an ordered partition of the rest with a sign per element.
    """
    family = Family(family)
    everything = list(range(n))
    if family == Family.A:
        for partition in _partitions_into(everything, blocks):
            for order in permutations(partition):
                yield _rep_from_blocks(family, [[(i, 1) for i in block] for block in order], ())
        return
    for r in range(n - blocks + 1):
        for zero in combinations(everything, r):
            rest = [i for i in everything if i not in zero]
            for partition in _partitions_into(rest, blocks):
                for order in permutations(partition):
                    flat = [i for block in order for i in block]
                    for signs in product((1, -1), repeat=len(flat)):
                        sign_of = dict(zip(flat, signs))
                        yield _rep_from_blocks(family, [[(i, sign_of[i]) for i in block] for block in order], zero)


def enumerate_faces(cfg: PointConfig, k: int, threads: Optional[int] = None,
                    max_candidates: Optional[int] = None, verify_gp: bool = True) -> List[FaceRep]:
    """Canonical representatives of all k-faces of the tessellation"""
    if not 1 <= k <= cfg.d:
        raise ValueError(f'face dimension must lie in 1..{cfg.d}, got {k}')
    check_budget(cfg.family, cfg.n, max_candidates)
    if verify_gp:
        _require_gp(cfg)
    candidates = list(chain_reps(cfg.family, cfg.n, cfg.n - cfg.d + k))
    verdicts = parallel_map(partial(_face_nontrivial, cfg), candidates, threads)
    faces = [rep for rep, ok in zip(candidates, verdicts) if ok]
    logger.info('k=%d: %d of %d candidate faces are nontrivial', k, len(faces), len(candidates))
    return faces


def face_multiplicity(rep: FaceRep, n: Optional[int] = None) -> int:
    """Number of cones containing the face: product of group-size factorials (times 2^|zero group| for B)"""
    n = rep.n if n is None else n
    if n != rep.n:
        raise ValueError(f'representative has {rep.n} positions, expected {n}')
    total = 1
    for group in rep.groups():
        total *= factorial(len(group))
    zero = len(rep.zero_group())
    return total * factorial(zero) * 2 ** zero


def incidence_sum(cfg: PointConfig, k: int, threads: Optional[int] = None,
                  max_candidates: Optional[int] = None) -> int:
    """Sum of face multiplicities over all k-faces"""
    return sum(face_multiplicity(rep) for rep in enumerate_faces(cfg, k, threads, max_candidates))


def faces_by_linear_hull(cfg: PointConfig, k: int, threads: Optional[int] = None,
                         max_candidates: Optional[int] = None) -> Dict[Tuple, int]:
    """Number of k-faces inside each lattice subspace (linear hull)"""
    counts: Counter = Counter()
    for rep in enumerate_faces(cfg, k, threads, max_candidates):
        blocks = []
        for group in rep.groups():
            lead = group[0][1]
            blocks.append(frozenset((i, e * lead) for i, e in group))
        counts[(frozenset(blocks), frozenset(rep.zero_group()))] += 1
    return dict(counts)


# ============================================================
# Faces of a single cone
# ============================================================

def cone_faces(cfg: PointConfig, ordering: SignedOrdering, k: int) -> List[FaceRep]:
    """Canonical k-faces of D_(eps,sigma), obtained by keeping n-d+k chain inequalities"""
    if not 1 <= k <= cfg.d:
        raise ValueError(f'face dimension must lie in 1..{cfg.d}, got {k}')
    n, m = cfg.n, cfg.n - cfg.d + k
    if cfg.family == Family.A:
        positions, kept = range(1, n), m - 1
    else:
        positions, kept = range(1, n + 1), m
    faces = []
    for breaks in combinations(positions, kept):
        rep = FaceRep(family=cfg.family, sigma=ordering.sigma, eps=ordering.eps, breaks=breaks)
        if _face_nontrivial(cfg, rep):
            faces.append(canonical(rep))
    return faces


def cone_face_counts(cfg: PointConfig, ordering: SignedOrdering) -> Dict[int, int]:
    """f_k of one cone for k = 1..d"""
    return {k: len(cone_faces(cfg, ordering, k)) for k in range(1, cfg.d + 1)}


def _cone_k_faces(cfg: PointConfig, k: int, ordering: SignedOrdering) -> int:
    return len(cone_faces(cfg, ordering, k))


def incidence_sum_by_cones(cfg: PointConfig, k: int, threads: Optional[int] = None,
                           max_candidates: Optional[int] = None) -> int:
    """Sum over cones of their number of k-faces"""
    cones = enumerate_cones(cfg, threads, max_candidates)
    return sum(parallel_map(partial(_cone_k_faces, cfg, k), cones, threads))


def cone_face_list(cfg: PointConfig, ordering: SignedOrdering) -> List[Tuple[ConeH, int]]:
    """(face cone, dimension) for every nonzero face of one cone"""
    return [(face_cone(cfg, rep), k) for k in range(1, cfg.d + 1) for rep in cone_faces(cfg, ordering, k)]


# ============================================================
# Summary
# ============================================================

def summarize(cfg: PointConfig, threads: Optional[int] = None, max_candidates: Optional[int] = None,
              cones: Optional[List[SignedOrdering]] = None) -> TessellationSummary:
    """Enumerated cone count, k-face counts and multiplicity-weighted incidence sums"""
    if cones is None:
        cones = enumerate_cones(cfg, threads, max_candidates)
    faces = {k: enumerate_faces(cfg, k, threads, max_candidates, verify_gp=False) for k in range(1, cfg.d + 1)}
    try:
        return TessellationSummary(
            family=cfg.family, n=cfg.n, d=cfg.d,
            cone_count=len(cones),
            face_counts={k: len(reps) for k, reps in faces.items()},
            incidence_sums={k: sum(face_multiplicity(rep) for rep in reps) for k, reps in faces.items()},
        )
    except ValueError as e:
        raise VerificationMismatch(f'inconsistent enumeration: {e}') from e
