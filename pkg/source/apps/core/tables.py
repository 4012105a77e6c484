"""Order, meet and canonical-form machinery over operation tables.

Every function here accepts any finite join structure: an AlgebraTable, a
SemimoduleTable or a bare n x n join array.
"""
import itertools
import logging
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np
from cachetools import LRUCache, cached

from .exceptions import InputError, UnsupportedError
from .models import INDEX_DTYPE, AlgebraTable, CanonicalKey, Poset
from .services import Report

logger = logging.getLogger(__name__)


def join_table(structure: Any) -> np.ndarray:
    if isinstance(structure, np.ndarray):
        return structure
    if hasattr(structure, 'join'):
        return structure.join
    return np.asarray(structure, dtype=INDEX_DTYPE)


def first_violation(mask: np.ndarray) -> Optional[Tuple[int, ...]]:
    """Lexicographically first index tuple where mask holds"""
    hits = np.argwhere(mask)
    if not len(hits):
        return None
    return tuple(int(v) for v in hits[0])


def leq_matrix(structure: Any) -> np.ndarray:
    join = join_table(structure)
    return join == np.arange(join.shape[0])[None, :]


def order_from_join(structure: Any) -> Poset:
    join = join_table(structure)
    return Poset(join.shape[0], leq_matrix(join))


def least_element(structure: Any) -> Optional[int]:
    leq = leq_matrix(structure)
    candidates = np.flatnonzero(leq.all(axis=1))
    return int(candidates[0]) if len(candidates) else None


def greatest_element(structure: Any) -> Optional[int]:
    leq = leq_matrix(structure)
    candidates = np.flatnonzero(leq.all(axis=0))
    return int(candidates[0]) if len(candidates) else None


def require_least(structure: Any, operation: str) -> int:
    bottom = least_element(structure)
    if bottom is None:
        raise UnsupportedError(f"{operation} needs a least element", {'operation': operation})
    return bottom


# Law masks. Each returns a boolean array that is True exactly at violations.

def associativity_mask(table: np.ndarray) -> np.ndarray:
    n = table.shape[0]
    ar = np.arange(n)
    lhs = table[table[:, :, None], ar[None, None, :]]
    rhs = table[ar[:, None, None], table[None, :, :]]
    return lhs != rhs


def left_distributivity_mask(mult: np.ndarray, join: np.ndarray) -> np.ndarray:
    """x(y v z) != xy v xz"""
    ar = np.arange(mult.shape[0])
    lhs = mult[ar[:, None, None], join[None, :, :]]
    rhs = join[mult[:, :, None], mult[:, None, :]]
    return lhs != rhs


def right_distributivity_mask(mult: np.ndarray, join: np.ndarray) -> np.ndarray:
    """(x v y)z != xz v yz"""
    ar = np.arange(mult.shape[0])
    lhs = mult[join[:, :, None], ar[None, None, :]]
    rhs = join[mult[:, None, :], mult[None, :, :]]
    return lhs != rhs


def semilattice_report(join: np.ndarray, name: str = 'semilattice') -> Report:
    """Idempotent, commutative, associative"""
    n = join.shape[0]
    checks = (
        ('join idempotent', np.diag(join) != np.arange(n)),
        ('join commutative', join != join.T),
        ('join associative', associativity_mask(join)),
    )
    for law, mask in checks:
        witness = first_violation(mask)
        if witness is not None:
            return Report.failed_with(name, f"{law} fails at {witness}", witness, details={'law': law})
    return Report.passed(name)


def validate(a: AlgebraTable) -> Report:
    """Semiring laws: semilattice join, associative mult with unit, two-sided distributivity"""
    n = a.size
    for label in a.BINARY_TABLES:
        table = getattr(a, label)
        if table is not None and table.shape != (n, n):
            raise InputError(f"{a.name}: {label} has shape {table.shape}, expected {(n, n)}")
    for label in a.UNARY_TABLES:
        table = getattr(a, label)
        if table is not None and table.shape != (n,):
            raise InputError(f"{a.name}: {label} has shape {table.shape}, expected {(n,)}")

    report = semilattice_report(a.join, 'validate')
    if report.failed:
        return report
    ar = np.arange(n)
    checks = (
        ('mult associative', associativity_mask(a.mult)),
        ('left unit', a.mult[a.one, :] != ar),
        ('right unit', a.mult[:, a.one] != ar),
        ('left distributive', left_distributivity_mask(a.mult, a.join)),
        ('right distributive', right_distributivity_mask(a.mult, a.join)),
    )
    for law, mask in checks:
        witness = first_violation(mask)
        if witness is not None:
            return Report.failed_with('validate', f"{law} fails at {witness}", witness, details={'law': law})
    return Report.passed('validate')


@cached(cache=LRUCache(maxsize=256), key=lambda join: (join.shape[0], join.tobytes()))
def _meet_table(join: np.ndarray) -> np.ndarray:
    n = join.shape[0]
    leq = leq_matrix(join)
    below_count = leq.sum(axis=0)
    meet = np.empty((n, n), dtype=INDEX_DTYPE)
    for x in range(n):
        # lower[y, z]: z is below both x and y
        lower = leq[:, x][None, :] & leq.T
        if not lower.any(axis=1).all():
            y = int(np.flatnonzero(~lower.any(axis=1))[0])
            raise UnsupportedError(f"{x} and {y} have no common lower bound", {'pair': [x, y]})
        meet[x] = np.where(lower, below_count[None, :], -1).argmax(axis=1)
    meet.setflags(write=False)
    return meet


def meet_from_join(structure: Any) -> np.ndarray:
    """Full meet table (greatest lower bounds) of a finite join structure"""
    join = np.ascontiguousarray(join_table(structure), dtype=INDEX_DTYPE)
    require_least(join, 'meet_from_join')
    return _meet_table(join)


def derived_meet(a: Any, x: int, y: int) -> int:
    """Greatest lower bound of x and y in the join order"""
    return int(meet_from_join(a)[x, y])


def join_irreducibles(p: Poset, join: Any) -> List[int]:
    """Elements that are neither least nor a join of two strictly smaller elements"""
    join = join_table(join)
    leq = p.leq
    n = p.size
    bottom = least_element(join)
    result = []
    for x in range(n):
        if x == bottom:
            continue
        strict = leq[:, x].copy()
        strict[x] = False
        if not (join[np.ix_(strict, strict)] == x).any():
            result.append(x)
    return result


def irreducibles_of(structure: Any) -> List[int]:
    join = join_table(structure)
    return join_irreducibles(order_from_join(join), join)


def is_lattice_distributive(structure: Any) -> Report:
    """x ^ (y v z) = (x ^ y) v (x ^ z) for all triples"""
    join = join_table(structure)
    meet = meet_from_join(join)
    witness = first_violation(left_distributivity_mask(meet, join))
    if witness is not None:
        return Report.failed_with('lattice_distributive',
                                  f"meet does not distribute over join at {witness}", witness)
    return Report.passed('lattice_distributive')


# Canonical forms

def _minimal_encoding(n: int, signature: Sequence[Tuple], binary: Sequence[np.ndarray],
                      unary: Sequence[np.ndarray], constants: Sequence[Optional[int]]) -> bytes:
    """Least encoding over all relabellings that sort elements by signature.

    Isomorphisms preserve the signature, so the set of candidate encodings
    (and hence its minimum) is an isomorphism invariant.
    """
    order = sorted(range(n), key=lambda x: signature[x])
    blocks = [list(group) for _, group in itertools.groupby(order, key=lambda x: signature[x])]
    candidates = []
    for choice in itertools.product(*(itertools.permutations(block) for block in blocks)):
        candidates.append([x for block in choice for x in block])
    inverse = np.array(candidates, dtype=INDEX_DTYPE)  # inverse[c, new] = old
    k = len(inverse)
    perm = np.argsort(inverse, axis=1)  # perm[c, old] = new

    columns = [np.full((k, 1), n, dtype=INDEX_DTYPE)]
    for constant in constants:
        if constant is None:
            columns.append(np.full((k, 1), n, dtype=INDEX_DTYPE))
        else:
            columns.append(perm[:, [constant]])
    for table in binary:
        relabelled = table[inverse[:, :, None], inverse[:, None, :]].reshape(k, -1)
        columns.append(np.take_along_axis(perm, relabelled, axis=1))
    for table in unary:
        columns.append(np.take_along_axis(perm, table[inverse], axis=1))
    rows = np.concatenate(columns, axis=1)
    best = np.lexsort(rows.T[::-1])[0]
    return rows[best].astype('>u2').tobytes()


def canonical_key(a: AlgebraTable) -> CanonicalKey:
    """Isomorphism-class key over relabellings fixing 1 (and 0 when declared)"""
    n = a.size
    leq = leq_matrix(a.join)
    below = leq.sum(axis=0)
    above = leq.sum(axis=1)
    idempotent = np.diag(a.mult) == np.arange(n)
    signature = [
        (x != a.one, x != a.zero, int(below[x]), int(above[x]), not idempotent[x])
        for x in range(n)
    ]
    unary = [t for t in (a.lneg, a.rneg) if t is not None]
    flags = (0 if a.lneg is None else 1, 0 if a.rneg is None else 1)
    encoding = _minimal_encoding(n, signature, [a.join, a.mult], unary, [a.one, a.zero])
    return CanonicalKey(bytes(flags) + encoding)


def lattice_key(structure: Any) -> CanonicalKey:
    """Isomorphism-class key of a bare join structure"""
    join = join_table(structure)
    n = join.shape[0]
    leq = leq_matrix(join)
    below = leq.sum(axis=0)
    above = leq.sum(axis=1)
    signature = [(int(below[x]), int(above[x])) for x in range(n)]
    return CanonicalKey(_minimal_encoding(n, signature, [join], [], []))


def is_self_dual(structure: Any) -> bool:
    """Whether the lattice is isomorphic to its order dual"""
    join = join_table(structure)
    return lattice_key(join) == lattice_key(meet_from_join(join))
