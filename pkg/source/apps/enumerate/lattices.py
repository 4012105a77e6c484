"""Finite lattices up to isomorphism.

Posets are built with a natural labelling: 0 is the bottom, n-1 the top, and
element j only has predecessors among 0..j-1. Each inner element picks a
down-closed set of predecessors; joins are read off upper-set signatures.
"""
import logging
from typing import Dict, Iterator, List, Optional

import numpy as np

from source.apps.core.models import INDEX_DTYPE, CanonicalKey
from source.apps.core.tables import is_lattice_distributive, is_self_dual, lattice_key

logger = logging.getLogger(__name__)


def _down_closed_subsets(leq: np.ndarray, j: int) -> Iterator[np.ndarray]:
    """Down-closed subsets of 0..j-1 that contain 0, as masks over 0..n-1"""
    n = leq.shape[0]
    for bits in range(1, 1 << j, 2):
        mask = np.zeros(n, dtype=bool)
        mask[[k for k in range(j) if bits >> k & 1]] = True
        if not (leq[:, mask].any(axis=1) & ~mask)[:j].any():
            yield mask


def join_from_order(leq: np.ndarray) -> Optional[np.ndarray]:
    """Least upper bounds by upper-set signature, or None if some pair has none"""
    n = leq.shape[0]
    lub_id = {tuple(leq[i, :]): i for i in range(n)}
    join = np.zeros((n, n), dtype=INDEX_DTYPE)
    for i in range(n):
        for j in range(i, n):
            above = tuple(leq[i, :] & leq[j, :])
            if above not in lub_id:
                return None
            join[i, j] = join[j, i] = lub_id[above]
    join.setflags(write=False)
    return join


def _naturally_labelled(n: int) -> Iterator[np.ndarray]:
    leq = np.eye(n, dtype=bool)
    leq[0, :] = True
    leq[:, n - 1] = True

    def extend(j: int) -> Iterator[np.ndarray]:
        if j == n - 1:
            yield leq.copy()
            return
        for below in _down_closed_subsets(leq, j):
            leq[:j, j] = below[:j]
            yield from extend(j + 1)
        leq[:j, j] = False
        leq[0, j] = True

    if n == 1:
        yield np.ones((1, 1), dtype=bool)
    else:
        yield from extend(1)


def enumerate_lattices(n: int, self_dual_only: bool = False,
                       nondistributive_only: bool = False) -> List[np.ndarray]:
    """One join table per isomorphism class of n-element lattices, sorted by canonical key"""
    found: Dict[CanonicalKey, np.ndarray] = {}
    for leq in _naturally_labelled(n):
        join = join_from_order(leq)
        if join is None:
            continue
        key = lattice_key(join)
        if key in found:
            continue
        if self_dual_only and not is_self_dual(join):
            continue
        if nondistributive_only and is_lattice_distributive(join).success:
            continue
        found[key] = join
    logger.debug(f"{len(found)} lattices of size {n}")
    return [found[key] for key in sorted(found)]
