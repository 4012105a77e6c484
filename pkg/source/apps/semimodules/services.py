"""Constructions, ideals and homomorphisms of finite semimodules"""
import itertools
import logging
from collections import deque
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from source.apps.axioms.services import is_involutive_semiring, residuals
from source.apps.core.exceptions import ConsistencyError, InputError, PreconditionError, UnsupportedError
from source.apps.core.models import INDEX_DTYPE, AlgebraTable
from source.apps.core.services import Report
from source.apps.core.tables import (
    first_violation,
    greatest_element,
    irreducibles_of,
    join_table,
    least_element,
    leq_matrix,
    meet_from_join,
    require_least,
    semilattice_report,
)
from .models import HomKind, HomMap, IdealSet, SemimoduleTable, zero_of

logger = logging.getLogger(__name__)


def boolean_semifield() -> AlgebraTable:
    """The two-element Boolean semifield B with complement as both negations"""
    return AlgebraTable.from_lists(
        'B2',
        join=[[0, 1], [1, 1]],
        mult=[[0, 0], [0, 1]],
        one=1, zero=0, lneg=[1, 0], rneg=[1, 0],
        display=['0', '1'],
    )


# Construction

def validate_semimodule(m: SemimoduleTable) -> Report:
    """Semilattice with zero plus the five action axioms"""
    a = m.over
    if m.action.shape != (a.size, m.size):
        raise InputError(f"{m.name}: action has shape {m.action.shape}, expected {(a.size, m.size)}")
    report = semilattice_report(m.join, 'semimodule')
    if report.failed:
        return report
    act, join = m.action, m.join
    ar_a, ar_m = np.arange(a.size), np.arange(m.size)
    checks = [
        ('x v 0 = x', m.join[:, m.zero] != ar_m),
        ('(ab).x = a.(b.x)', act[a.mult[:, :, None], ar_m[None, None, :]] != act[ar_a[:, None, None], act[None, :, :]]),
        ('a.(x v y) = a.x v a.y', act[ar_a[:, None, None], join[None, :, :]] != join[act[:, :, None], act[:, None, :]]),
        ('(a v b).x = a.x v b.x', act[a.join[:, :, None], ar_m[None, None, :]] != join[act[:, None, :], act[None, :, :]]),
    ]
    bottom = least_element(a)
    if bottom is not None:
        checks.append(('0.x = 0', act[bottom, :] != m.zero))
    checks.append(('a.0 = 0', act[:, m.zero] != m.zero))
    checks.append(('1.x = x', act[a.one, :] != ar_m))
    for law, mask in checks:
        witness = first_violation(mask)
        if witness is not None:
            return Report.failed_with('semimodule', f"{law} fails at {witness}", witness, details={'axiom': law})
    return Report.passed('semimodule')


def regular(a: AlgebraTable) -> SemimoduleTable:
    """A acting on itself by left multiplication"""
    return SemimoduleTable(
        name=f"regular({a.name})", over=a, size=a.size, join=a.join,
        zero=require_least(a, 'regular'), action=a.mult, display=a.display,
    )


def trivial(a: AlgebraTable) -> SemimoduleTable:
    return SemimoduleTable(name=f"zero({a.name})", over=a, size=1, join=[[0]], zero=0,
                           action=np.zeros((a.size, 1), dtype=INDEX_DTYPE), display=('0',))


def _mixed_radix(sizes: Sequence[int]) -> Tuple[np.ndarray, np.ndarray]:
    """All coordinate tuples in lexicographic order, with their place weights"""
    elements = np.array(list(itertools.product(*(range(s) for s in sizes))), dtype=INDEX_DTYPE)
    weights = np.ones(len(sizes), dtype=INDEX_DTYPE)
    for i in range(len(sizes) - 2, -1, -1):
        weights[i] = weights[i + 1] * sizes[i + 1]
    return elements.reshape(-1, len(sizes)), weights


def _tuple_names(elements: np.ndarray, factors: Sequence) -> Tuple[str, ...]:
    return tuple('(' + ','.join(f.element_name(int(v)) for f, v in zip(factors, row)) + ')'
                 for row in elements)


def product(ms: Sequence[SemimoduleTable], name: Optional[str] = None) -> SemimoduleTable:
    """Componentwise direct product of semimodules over one algebra"""
    if not ms:
        raise InputError("product needs at least one semimodule")
    over = ms[0].over
    if any(m.over != over for m in ms[1:]):
        raise InputError("product factors must be semimodules over the same algebra")
    elements, weights = _mixed_radix([m.size for m in ms])
    size = len(elements)
    join = np.zeros((size, size), dtype=INDEX_DTYPE)
    action = np.zeros((over.size, size), dtype=INDEX_DTYPE)
    zero = 0
    for i, m in enumerate(ms):
        column = elements[:, i]
        join += m.join[column[:, None], column[None, :]] * weights[i]
        action += m.action[:, column] * weights[i]
        zero += m.zero * int(weights[i])
    return SemimoduleTable(
        name=name or 'x'.join(m.name for m in ms), over=over, size=size,
        join=join, zero=zero, action=action, display=_tuple_names(elements, ms),
    )


def free(a: AlgebraTable, k: int) -> SemimoduleTable:
    """A^k with componentwise join and action; k = 0 gives the zero semimodule"""
    if k < 0:
        raise InputError(f"free rank must be non-negative, got {k}")
    if k == 0:
        return trivial(a)
    return product([regular(a)] * k, name=f"free({a.name},{k})")


def product_semiring(algebras: Sequence[AlgebraTable], name: Optional[str] = None) -> AlgebraTable:
    """Componentwise direct product; constants and negations kept when every factor has them"""
    if not algebras:
        raise InputError("product_semiring needs at least one factor")
    elements, weights = _mixed_radix([a.size for a in algebras])
    size = len(elements)
    tables = {label: np.zeros((size, size), dtype=INDEX_DTYPE) for label in ('join', 'mult')}
    negations = {label: np.zeros(size, dtype=INDEX_DTYPE) for label in ('lneg', 'rneg')}
    one, zero = 0, 0
    for i, a in enumerate(algebras):
        column = elements[:, i]
        for label in tables:
            tables[label] += getattr(a, label)[column[:, None], column[None, :]] * weights[i]
        for label in negations:
            if getattr(a, label) is not None:
                negations[label] += getattr(a, label)[column] * weights[i]
        one += a.one * int(weights[i])
        zero += (a.zero or 0) * int(weights[i])
    has_zero = all(a.zero is not None for a in algebras)
    has_negations = all(a.has_negations for a in algebras)
    return AlgebraTable(
        name=name or 'x'.join(a.name for a in algebras), size=size,
        join=tables['join'], mult=tables['mult'], one=one,
        zero=zero if has_zero else None,
        lneg=negations['lneg'] if has_negations else None,
        rneg=negations['rneg'] if has_negations else None,
        display=_tuple_names(elements, algebras),
    )


def subsemimodule_generated(m: SemimoduleTable, gens: Iterable[int]) -> Tuple[int, ...]:
    """Least subset containing gens and 0, closed under join and action"""
    mask = np.zeros(m.size, dtype=bool)
    mask[m.zero] = True
    for g in gens:
        if not 0 <= int(g) < m.size:
            raise InputError(f"generator {g} is not an element of {m.name}")
        mask[int(g)] = True
    while True:
        idx = np.flatnonzero(mask)
        grown = mask.copy()
        grown[m.join[np.ix_(idx, idx)].ravel()] = True
        grown[m.action[:, idx].ravel()] = True
        if np.array_equal(grown, mask):
            return tuple(int(x) for x in idx)
        mask = grown


def restrict(m: SemimoduleTable, subset: Iterable[int], name: Optional[str] = None) -> SemimoduleTable:
    """A subsemimodule as a semimodule table of its own (elements renumbered in order)"""
    idx = np.array(sorted(set(int(x) for x in subset)), dtype=INDEX_DTYPE)
    if len(idx) == 0 or m.zero not in idx:
        raise InputError(f"a subsemimodule of {m.name} must contain its zero")
    remap = np.full(m.size, -1, dtype=INDEX_DTYPE)
    remap[idx] = np.arange(len(idx))
    join = remap[m.join[np.ix_(idx, idx)]]
    action = remap[m.action[:, idx]]
    if (join < 0).any() or (action < 0).any():
        raise InputError(f"{idx.tolist()} is not closed in {m.name}")
    display = tuple(m.element_name(int(x)) for x in idx)
    return SemimoduleTable(name=name or f"{m.name}|{len(idx)}", over=m.over, size=len(idx),
                           join=join, zero=int(remap[m.zero]), action=action, display=display)


def cyclic(a: AlgebraTable, u: int) -> SemimoduleTable:
    """The principal left ideal A.u as a subsemimodule of regular(a)"""
    reg = regular(a)
    return restrict(reg, subsemimodule_generated(reg, [u]), name=f"cyclic({a.name},{a.element_name(u)})")


def subsemimodules(m: SemimoduleTable) -> List[Tuple[int, ...]]:
    """Every subsemimodule, found by closing one new element at a time"""
    start = subsemimodule_generated(m, [])
    found: Dict[Tuple[int, ...], None] = {start: None}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        members = set(current)
        for x in range(m.size):
            if x in members:
                continue
            grown = subsemimodule_generated(m, current + (x,))
            if grown not in found:
                found[grown] = None
                queue.append(grown)
    return sorted(found, key=lambda s: (len(s), s))


# Ideals

def is_ideal(structure, elements: Iterable[int]) -> bool:
    """Contains the least element, downward closed, closed under join"""
    join = join_table(structure)
    n = join.shape[0]
    inside = np.zeros(n, dtype=bool)
    inside[list(elements)] = True
    bottom = least_element(join)
    if bottom is None or not inside[bottom]:
        return False
    leq = leq_matrix(join)
    if (leq[:, inside] & ~inside[:, None]).any():
        return False
    idx = np.flatnonzero(inside)
    return bool(inside[join[np.ix_(idx, idx)]].all())


def ideal_generators(structure) -> List[int]:
    """Generator of each ideal, in the order ideals() lists them.

    Every ideal of a finite join-semilattice with least element is the
    principal downset of the join of its members.
    """
    join = join_table(structure)
    require_least(join, 'ideals')
    leq = leq_matrix(join)
    downsets = {x: [int(y) for y in np.flatnonzero(leq[:, x])] for x in range(join.shape[0])}
    return sorted(downsets, key=lambda x: (len(downsets[x]), downsets[x]))


def ideals(structure) -> List[IdealSet]:
    join = join_table(structure)
    leq = leq_matrix(join)
    return [IdealSet.from_mask(leq[:, x], of=structure) for x in ideal_generators(join)]


def _positions(generators: Sequence[int]) -> np.ndarray:
    position = np.empty(len(generators), dtype=INDEX_DTYPE)
    position[list(generators)] = np.arange(len(generators))
    return position


def id_semimodule(a: AlgebraTable) -> SemimoduleTable:
    """Id(A) under intersection with a.I = {x | xa in I}; the zero is the full ideal"""
    generators = ideal_generators(a)
    position = _positions(generators)
    report = residuals(a)
    if report.failed:
        raise UnsupportedError(f"Id({a.name}) needs a residuated algebra", {'witness': report.witness})
    _, rres = report.data
    g = np.array(generators, dtype=INDEX_DTYPE)
    meet = meet_from_join(a)
    join = position[meet[g[:, None], g[None, :]]]
    # {x | xc <= t} is the downset of t/c
    action = position[rres[g[None, :], np.arange(a.size)[:, None]]]
    names = tuple(f"down({a.element_name(int(x))})" for x in g)
    return SemimoduleTable(name=f"Id({a.name})", over=a, size=a.size, join=join,
                           zero=int(position[greatest_element(a)]), action=action, display=names)


# Homomorphisms into B

def boolean_homs(structure) -> List[HomMap]:
    """All join- and zero-preserving maps to B, one per ideal (its kernel)"""
    b = boolean_semifield()
    homs = []
    for ideal in ideals(structure):
        values = tuple(0 if x in ideal else 1 for x in range(ideal.size))
        homs.append(HomMap(structure, b, values, HomKind.SEMILATTICE))
    return homs


def ker(f: HomMap) -> IdealSet:
    target = zero_of(f.cod)
    return IdealSet.from_elements(f.dom.size, (x for x, y in enumerate(f.map) if y == target), of=f.dom)


def hom_module(a: AlgebraTable) -> Tuple[SemimoduleTable, List[HomMap]]:
    """Hom_B(A, B) with pointwise join and (c.f)(t) = f(tc)"""
    homs = boolean_homs(a)
    values = np.array([h.map for h in homs], dtype=INDEX_DTYPE)
    index = {tuple(row): i for i, row in enumerate(values.tolist())}

    def lookup(row) -> int:
        key = tuple(int(v) for v in row)
        if key not in index:
            raise ConsistencyError(f"Hom({a.name},B) is not closed", {'map': list(key)})
        return index[key]

    k = len(homs)
    join = [[lookup(values[i] | values[j]) for j in range(k)] for i in range(k)]
    action = [[lookup(values[i][a.mult[:, c]]) for i in range(k)] for c in range(a.size)]
    zero = lookup(np.zeros(a.size, dtype=INDEX_DTYPE))
    names = tuple(f"ker:{','.join(a.element_name(x) for x in ker(h).elements())}" for h in homs)
    module = SemimoduleTable(name=f"Hom({a.name},B)", over=a, size=k, join=join, zero=zero,
                             action=action, display=names)
    return module, homs


def hom_id_iso_check(a: AlgebraTable) -> Report:
    """Ker is an A-semimodule isomorphism Hom_B(A, B) -> Id(A)"""
    hom, homs = hom_module(a)
    ideal_module = id_semimodule(a)
    positions = {ideal.members: i for i, ideal in enumerate(ideals(a))}
    kernel_map = HomMap(hom, ideal_module, tuple(positions[ker(h).members] for h in homs), HomKind.MODULE)
    for report in (validate_semimodule(hom), validate_semimodule(ideal_module)):
        if report.failed:
            report.name = 'hom_id_iso'
            return report
    if not kernel_map.is_bijective():
        return Report.failed_with('hom_id_iso', "Ker is not a bijection", kernel_map.map)
    report = kernel_map.check()
    if report.failed:
        return Report.failed_with('hom_id_iso', f"Ker is not an A-homomorphism: {report.error}",
                                  report.witness, details=report.details)
    return Report.passed('hom_id_iso', kernel_map.map, certificate=kernel_map)


def phi_check(a: AlgebraTable) -> Report:
    """Phi(x) = down(-x) is an isomorphism A -> Id(A) exactly when A is involutive"""
    if a.zero is None or least_element(a) != a.zero:
        raise PreconditionError(f"phi_check: {a.name} needs its zero to be the bottom")
    report = residuals(a)
    if report.failed:
        raise PreconditionError(f"phi_check: {a.name} is not residuated", report)
    lres, rres = report.data
    lneg, rneg = lres[:, a.zero], rres[a.zero, :]
    position = _positions(ideal_generators(a))
    phi = HomMap(regular(a), id_semimodule(a), tuple(int(position[v]) for v in rneg), HomKind.MODULE)
    isomorphism = phi.is_bijective() and phi.check().success
    involutive = is_involutive_semiring(a.with_(lneg=lneg, rneg=rneg)).success
    data = {'phi_isomorphism': isomorphism, 'involutive': involutive}
    if isomorphism != involutive:
        return Report.failed_with('phi', f"Phi isomorphism={isomorphism} but involutive={involutive}",
                                  phi.map, details=data)
    return Report.passed('phi', data, certificate=phi if isomorphism else None)


# Homomorphism search

def generating_sequence(m: SemimoduleTable, kind: HomKind = HomKind.MODULE) -> List[int]:
    """Join-irreducibles, those generating the largest subsemimodules first, minus redundant ones"""
    gens = irreducibles_of(m.join)
    if kind != HomKind.MODULE:
        return gens
    spans = {g: len(subsemimodule_generated(m, [g])) for g in gens}
    gens.sort(key=lambda g: (-spans[g], g))
    chosen: List[int] = []
    covered = set(subsemimodule_generated(m, []))
    for g in gens:
        if g not in covered:
            chosen.append(g)
            covered = set(subsemimodule_generated(m, chosen))
    return chosen


def _propagate(dom, cod, f: np.ndarray, kind: HomKind, injective: bool) -> Optional[np.ndarray]:
    """Close a partial map under f(x v y) = f(x) v f(y) (and f(a.x) = a.f(x)); None on conflict"""
    while True:
        assigned = np.flatnonzero(f >= 0)
        values = f[assigned]
        targets = [dom.join[np.ix_(assigned, assigned)].ravel()]
        images = [cod.join[np.ix_(values, values)].ravel()]
        if kind == HomKind.MODULE:
            targets.append(dom.action[:, assigned].ravel())
            images.append(cod.action[:, values].ravel())
        targets = np.concatenate(targets)
        images = np.concatenate(images)
        current = f[targets]
        if ((current >= 0) & (current != images)).any():
            return None
        fresh = current < 0
        if not fresh.any():
            break
        f[targets[fresh]] = images[fresh]
        if (f[targets[fresh]] != images[fresh]).any():
            return None
    if injective:
        values = f[f >= 0]
        if len(np.unique(values)) < len(values):
            return None
    return f


def enumerate_homs(dom, cod, kind: HomKind = HomKind.MODULE,
                   constraints: Optional[Dict[int, int]] = None,
                   injective: bool = False) -> Iterator[HomMap]:
    """Every hom of the given kind extending the constraints, in a fixed order"""
    kind = HomKind(kind)
    if kind == HomKind.MODULE and dom.over != cod.over:
        raise InputError("module homomorphisms need semimodules over the same algebra")
    f = np.full(dom.size, -1, dtype=INDEX_DTYPE)
    f[zero_of(dom)] = zero_of(cod)
    for x, y in (constraints or {}).items():
        if not (0 <= x < dom.size and 0 <= y < cod.size):
            raise InputError(f"constraint {x} -> {y} is out of range")
        if f[x] >= 0 and f[x] != y:
            return
        f[x] = y
    f = _propagate(dom, cod, f, kind, injective)
    if f is None:
        return
    order = generating_sequence(dom, kind) if kind == HomKind.MODULE else irreducibles_of(dom.join)
    yield from _extend(dom, cod, f, order, kind, injective)


def _extend(dom, cod, f: np.ndarray, order: List[int], kind: HomKind, injective: bool) -> Iterator[HomMap]:
    pending = [g for g in order if f[g] < 0]
    if not pending:
        if (f < 0).any():
            raise ConsistencyError("generating sequence does not generate", {'unassigned': np.flatnonzero(f < 0).tolist()})
        hom = HomMap(dom, cod, tuple(f.tolist()), kind)
        if hom.check().success:
            yield hom
        return
    g = pending[0]
    for value in range(cod.size):
        trial = f.copy()
        trial[g] = value
        extended = _propagate(dom, cod, trial, kind, injective)
        if extended is not None:
            yield from _extend(dom, cod, extended, pending[1:], kind, injective)


def find_isomorphism(m: SemimoduleTable, n: SemimoduleTable) -> Optional[HomMap]:
    """An A-isomorphism m -> n whose inverse is verified to be a homomorphism, or None"""
    if m.size != n.size or m.over != n.over:
        return None
    if sorted(leq_matrix(m.join).sum(axis=0)) != sorted(leq_matrix(n.join).sum(axis=0)):
        return None
    for hom in enumerate_homs(m, n, HomKind.MODULE, injective=True):
        if hom.is_bijective() and hom.inverse().check().success:
            return hom
    return None
