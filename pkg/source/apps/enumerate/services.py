"""Exhaustive generation of small algebras and the theorem batteries run over them.

Stages: lattices up to isomorphism, then the unit (and the negation for
involutive classes), then multiplication tables by backtracking over the
values on pairs of join-irreducibles, then a full re-check with the class
predicates. Each (lattice, unit, negation) triple is an independent
partition; partitions fan out over workers and are checkpointed one by one.
"""
import itertools
import logging
import time
from functools import reduce
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from source.apps.axioms.services import (
    is_commutative,
    is_involutive_rl,
    is_involutive_semiring,
    is_mult_idempotent,
    is_boolean_algebra,
    is_mv_algebra,
    is_mv_semiring,
    is_n_potent,
    is_n_vn_regular,
    is_one_bounded,
    is_one_bounded_involutive,
    residuals,
    resolve_predicate,
    with_derived_negations,
)
from source.apps.core.cache_manager import CacheManager
from source.apps.core.exceptions import (
    InputError,
    PreconditionError,
    SearchInterrupted,
    UnsupportedError,
)
from source.apps.core.models import INDEX_DTYPE, AlgebraTable
from source.apps.core.services import BaseService, LoggingService, Report
from source.apps.core.tables import (
    canonical_key,
    greatest_element,
    irreducibles_of,
    is_lattice_distributive,
    least_element,
    leq_matrix,
    meet_from_join,
)
from source.apps.decide.services import DecisionService, ideal_lattice_check
from source.apps.semimodules.services import hom_id_iso_check, phi_check
from source.apps.termeq.services import (
    galois_check,
    identity_battery,
    interval_agreement,
    invsr_to_irl,
    irl_to_invsr,
    roundtrip_check,
)
from source.layers.utils.file_management import CheckpointStore
from source.settings.settings_manager import settings_manager
from .lattices import enumerate_lattices
from .models import AlgebraClass, SearchSpec

logger = logging.getLogger(__name__)


# Stage 2: units and negations

def anti_automorphisms(join: np.ndarray) -> List[np.ndarray]:
    """Order-reversing bijections, as candidate -x tables"""
    leq = leq_matrix(join)
    n = join.shape[0]
    below, above = leq.sum(axis=0), leq.sum(axis=1)
    found = []
    for perm in itertools.permutations(range(n)):
        alpha = np.array(perm, dtype=INDEX_DTYPE)
        if (below[alpha] != above).any():
            continue
        if np.array_equal(leq, leq[alpha[None, :], alpha[:, None]]):
            found.append(alpha)
    return found


def unit_candidates(join: np.ndarray, algebra_class: AlgebraClass) -> List[int]:
    if algebra_class.one_bounded:
        return [greatest_element(join)]
    bottom = least_element(join)
    return [x for x in range(join.shape[0]) if x != bottom]


# Stage 3: multiplication tables

class MultiplicationSearch:
    """Backtracking over x.y on join-irreducibles, x.y elsewhere being the join of those below.

    The partial table uses the sentinel n for unknown entries; associativity,
    distributivity, the unit laws and (for involutive classes) the order
    pattern x.y <= -1 iff x <= -y are checked on every known entry after each
    assignment.
    """

    def __init__(self, join: np.ndarray, unit: int, one_bounded: bool = False,
                 rneg: Optional[np.ndarray] = None):
        self.join = np.asarray(join, dtype=INDEX_DTYPE)
        n = self.n = self.join.shape[0]
        self.leq = leq_matrix(self.join)
        self.meet = meet_from_join(self.join)
        self.bottom = least_element(self.join)
        self.top = greatest_element(self.join)
        self.unit = unit
        self.one_bounded = one_bounded
        self.rneg = rneg
        self.minus_one = None if rneg is None else int(rneg[unit])

        downset = self.leq.sum(axis=0)
        self.jis = sorted(irreducibles_of(self.join), key=lambda x: (downset[x], x))
        k = len(self.jis)
        self.pairs = sorted(itertools.product(range(k), repeat=2), key=lambda pq: (max(pq), pq))
        order = {pq: t for t, pq in enumerate(self.pairs)}
        below_ji = [[p for p, i in enumerate(self.jis) if self.leq[i, x]] for x in range(n)]
        self.parts: Dict[Tuple[int, int], List[int]] = {}
        self.completes: List[List[Tuple[int, int]]] = [[] for _ in self.pairs]
        for x, y in itertools.product(range(n), repeat=2):
            parts = [order[(p, q)] for p in below_ji[x] for q in below_ji[y]]
            if parts:
                self.parts[(x, y)] = parts
                self.completes[max(parts)].append((x, y))

        sentinel = np.full((n + 1, n + 1), n, dtype=INDEX_DTYPE)
        sentinel[:n, :n] = self.join
        self.join_ext = sentinel
        self.table = np.full((n + 1, n + 1), n, dtype=INDEX_DTYPE)
        self.table[self.bottom, :n] = self.bottom
        self.table[:n, self.bottom] = self.bottom
        self.values = np.full(len(self.pairs), -1, dtype=INDEX_DTYPE)

    def _candidates(self, t: int) -> List[int]:
        p, q = self.pairs[t]
        i, j = self.jis[p], self.jis[q]
        if i == self.unit or j == self.unit:
            return [j if i == self.unit else i]
        lower = reduce(lambda acc, s: int(self.join[acc, self.values[s]]),
                       (s for s in self.parts[(i, j)] if s != t), self.bottom)
        upper = int(self.meet[i, j]) if self.one_bounded else self.top
        mask = self.leq[lower, :] & self.leq[:, upper]
        if self.rneg is not None:
            mask &= self.leq[:, self.minus_one] == self.leq[i, self.rneg[j]]
        return [int(w) for w in np.flatnonzero(mask)]

    def _consistent(self, entries: Sequence[Tuple[int, int]]) -> bool:
        n = self.n
        T = self.table
        for x, y in entries:
            value = T[x, y]
            if x == self.unit and value != y or y == self.unit and value != x:
                return False
            if self.rneg is not None and self.leq[value, self.minus_one] != self.leq[x, self.rneg[y]]:
                return False
        ar = np.arange(n)
        known = T[:n, :n]
        lhs = T[known[:, :, None], ar[None, None, :]]
        rhs = T[ar[:, None, None], known[None, :, :]]
        if ((lhs != n) & (rhs != n) & (lhs != rhs)).any():
            return False
        J = self.join_ext
        left = T[ar[:, None, None], self.join[None, :, :]]
        left_split = J[known[:, :, None], known[:, None, :]]
        if ((left != n) & (left_split != n) & (left != left_split)).any():
            return False
        right = T[self.join[:, :, None], ar[None, None, :]]
        right_split = J[known[:, None, :], known[None, :, :]]
        return not ((right != n) & (right_split != n) & (right != right_split)).any()

    def _extend(self, t: int) -> Iterator[np.ndarray]:
        if t == len(self.pairs):
            yield self.table[:self.n, :self.n].copy()
            return
        entries = self.completes[t]
        for w in self._candidates(t):
            self.values[t] = w
            for x, y in entries:
                self.table[x, y] = reduce(lambda acc, s: int(self.join[acc, self.values[s]]),
                                          self.parts[(x, y)], self.bottom)
            if self._consistent(entries):
                yield from self._extend(t + 1)
            for x, y in entries:
                self.table[x, y] = self.n
        self.values[t] = -1

    def tables(self) -> Iterator[np.ndarray]:
        yield from self._extend(0)


# Stage 4: class predicates and filters

def _all_pass(*predicates: Callable[[AlgebraTable], Report]) -> Callable[[AlgebraTable], bool]:
    def check(a: AlgebraTable) -> bool:
        return all(p(a).success for p in predicates)
    return check


CLASS_AXIOMS: Dict[AlgebraClass, Tuple[str, ...]] = {
    AlgebraClass.IDEMPOTENT_SEMIRING: ('is_idempotent_semiring',),
    AlgebraClass.ONE_BOUNDED_IDEMPOTENT: ('is_idempotent_semiring', 'is_one_bounded'),
    AlgebraClass.INVOLUTIVE_SEMIRING: ('is_involutive_semiring',),
    AlgebraClass.ONE_BOUNDED_INVOLUTIVE: ('is_one_bounded', 'is_one_bounded_involutive'),
    AlgebraClass.POINTED_RESIDUATED: ('validate', 'residuals'),
}

CLASS_PREDICATES: Dict[AlgebraClass, Callable[[AlgebraTable], bool]] = {
    cls: _all_pass(*(resolve_predicate(name) for name in names)) for cls, names in CLASS_AXIOMS.items()
}


def _decision_service() -> DecisionService:
    return DecisionService(settings_manager, cache_manager=CacheManager(settings_manager))


DECISION_FILTERS: Dict[str, Callable[[AlgebraTable], Report]] = {
    'is_self_injective': lambda a: _decision_service().is_self_injective(a),
}


def filter_verdict(a: AlgebraTable, name: str) -> bool:
    """Verdict of a named predicate; structural refusals count as fail"""
    try:
        if name in DECISION_FILTERS:
            return DECISION_FILTERS[name](a).success
        return resolve_predicate(name)(a).success
    except (UnsupportedError, PreconditionError) as e:
        logger.debug(f"{name} not applicable to {a.name}: {e}")
        return False


def _zero_choices(join: np.ndarray, unit: int, algebra_class: AlgebraClass,
                  rneg: Optional[np.ndarray]) -> List[int]:
    if algebra_class == AlgebraClass.POINTED_RESIDUATED:
        return list(range(join.shape[0]))
    if rneg is not None:
        return [int(rneg[unit])]
    return [least_element(join)]


def search_partition(payload: Dict[str, Any]) -> List[Dict[str, Any]]:
    """Every algebra of one (lattice, unit, negation) partition passing class and filters.

    Top-level and list-in/list-out so joblib workers can run it.
    """
    algebra_class = AlgebraClass(payload['class'])
    join = np.array(payload['join'], dtype=INDEX_DTYPE)
    rneg = None if payload.get('rneg') is None else np.array(payload['rneg'], dtype=INDEX_DTYPE)
    lneg = None if rneg is None else np.argsort(rneg).astype(INDEX_DTYPE)
    unit = payload['unit']
    search = MultiplicationSearch(join, unit, algebra_class.one_bounded, rneg)
    accept = CLASS_PREDICATES[algebra_class]
    filters = [tuple(f) for f in payload.get('filters', [])]
    found = []
    for mult in search.tables():
        for zero in _zero_choices(join, unit, algebra_class, rneg):
            a = AlgebraTable(name=payload['id'], size=len(join), join=join, mult=mult, one=unit,
                             zero=zero, lneg=lneg, rneg=rneg)
            if not accept(a):
                continue
            if payload.get('nondistributive_only') and is_lattice_distributive(a).success:
                continue
            if any(filter_verdict(a, name) != expected for name, expected in filters):
                continue
            found.append({'key': canonical_key(a).hex(), 'algebra': a.to_lists()})
    return found


class EnumerationService(BaseService):
    """Partitioned, checkpointed search over one algebra class"""

    def __init__(self, settings, cache_manager=None, performance_monitor=None, resource_monitor=None):
        super().__init__(cache_manager)
        self.settings = settings
        self.performance_monitor = performance_monitor
        self.resource_monitor = resource_monitor
        search = settings.get_search_settings()
        self.min_size = search.get('min_size', 2)
        self.max_size_limit = search.get('max_size_limit', 7)
        self.time_budget = search.get('time_budget')
        self.checkpoint_dir = search.get('checkpoint_dir', '.semiring-checkpoints')
        self.checkpoint_version = search.get('checkpoint_version', 1)
        self.progress = search.get('progress', False)

    @property
    def monitor(self):
        """Get performance monitor decorator"""
        if self.performance_monitor is None:
            return lambda name: (lambda func: func)
        return self.performance_monitor.monitor

    def _validate(self, data: Dict[str, Any]) -> None:
        spec = data.get('spec')
        if not isinstance(spec, SearchSpec):
            raise InputError("a SearchSpec is required")
        if spec.max_size > self.max_size_limit:
            raise InputError(f"max_size {spec.max_size} exceeds the supported limit {self.max_size_limit}",
                             {'max_size': spec.max_size})
        for name, _ in spec.parsed_filters():
            if name not in DECISION_FILTERS:
                resolve_predicate(name)

    def lattices(self, size: int, spec: SearchSpec) -> List[np.ndarray]:
        def create():
            return enumerate_lattices(size, self_dual_only=spec.algebra_class.involutive,
                                      nondistributive_only=spec.nondistributive_only)
        key = f"lattices:{size}:{int(spec.algebra_class.involutive)}:{int(spec.nondistributive_only)}"
        return self.get_cached(key, create)

    def partitions(self, spec: SearchSpec, size: int) -> List[Dict[str, Any]]:
        """Independent search units for one carrier size, in a fixed order"""
        payloads = []
        filters = [list(f) for f in spec.parsed_filters()]
        for li, join in enumerate(self.lattices(size, spec)):
            negations = anti_automorphisms(join) if spec.algebra_class.involutive else [None]
            for unit in unit_candidates(join, spec.algebra_class):
                for ni, rneg in enumerate(negations):
                    payloads.append({
                        'id': f"{size}:{li}:{unit}:{ni}",
                        'class': spec.algebra_class.value,
                        'join': join.tolist(),
                        'unit': int(unit),
                        'rneg': None if rneg is None else rneg.tolist(),
                        'filters': filters,
                        'nondistributive_only': spec.nondistributive_only,
                    })
        return payloads

    def checkpoint_store(self, spec: SearchSpec, path: Optional[str] = None) -> CheckpointStore:
        if path is not None:
            return CheckpointStore(path, self.checkpoint_version)
        return CheckpointStore.for_spec(self.checkpoint_dir, spec.key(), self.checkpoint_version)

    def search_size(self, spec: SearchSpec, size: int, store: Optional[CheckpointStore] = None,
                    deadline: Optional[float] = None) -> List[AlgebraTable]:
        """All algebras of one size, one per isomorphism class, sorted by canonical key"""
        return self.monitor(f"search_size:{size}")(self._search_size)(spec, size, store, deadline)

    def _search_size(self, spec: SearchSpec, size: int, store: Optional[CheckpointStore],
                     deadline: Optional[float]) -> List[AlgebraTable]:
        state_key = f"{spec.key()}#{size}"
        state = store.load(state_key) if store is not None else {'spec': state_key, 'done': [], 'found': []}
        done = set(state['done'])
        found: Dict[str, Dict] = {entry['key']: entry['algebra'] for entry in state['found']}
        pending = [p for p in self.partitions(spec, size) if p['id'] not in done]
        workers = self.resource_monitor.max_workers if self.resource_monitor else 1
        LoggingService.log_info("searching", extra={'class': spec.algebra_class.value, 'size': size,
                                                    'partitions': len(pending), 'workers': workers})
        results = (self.resource_monitor.imap(search_partition, pending, f"partitions:{size}")
                   if self.resource_monitor else map(search_partition, pending))
        bar = tqdm(total=len(pending), desc=f"size {size}", disable=not self.progress, leave=False)
        try:
            for payload, result in zip(pending, results):
                for entry in result:
                    found.setdefault(entry['key'], entry['algebra'])
                state['done'].append(payload['id'])
                bar.update(1)
                if store is not None:
                    state['found'] = [{'key': k, 'algebra': v} for k, v in found.items()]
                    store.save(state)
                if deadline is not None and time.monotonic() > deadline:
                    raise SearchInterrupted(
                        f"time budget exhausted at size {size} after {len(state['done'])} partitions",
                        checkpoint=str(store.path) if store is not None else None,
                        details={'size': size, 'done': len(state['done'])})
        finally:
            bar.close()
        algebras = []
        for index, key in enumerate(sorted(found)):
            data = dict(found[key], name=f"{spec.algebra_class.value}/{size}/{index}")
            algebras.append(AlgebraTable.from_dict(data))
        return algebras

    def enumerate_algebras(self, spec: SearchSpec, checkpoint: Optional[str] = None,
                           time_budget: Optional[float] = None) -> Iterator[AlgebraTable]:
        """One representative per isomorphism class, by size then canonical key"""
        validation = self.validate({'spec': spec})
        if validation.failed:
            raise InputError(validation.error, validation.details)
        budget = self.time_budget if time_budget is None else time_budget
        deadline = time.monotonic() + budget if budget else None
        store = self.checkpoint_store(spec, checkpoint) if checkpoint is not None else None
        emitted = 0
        for size in range(self.min_size, spec.max_size + 1):
            for a in self.search_size(spec, size, store, deadline):
                if spec.limit is not None and emitted >= spec.limit:
                    return
                emitted += 1
                yield a

    def smallest_nondistributive(self, max_size: int, checkpoint: Optional[str] = None,
                                 time_budget: Optional[float] = None) -> Report:
        """Least size with a non-distributive 1-bounded involutive algebra, with one witness"""
        spec = SearchSpec(max_size=max_size, algebra_class=AlgebraClass.ONE_BOUNDED_INVOLUTIVE,
                          nondistributive_only=True)
        validation = self.validate({'spec': spec})
        if validation.failed:
            raise InputError(validation.error, validation.details)
        budget = self.time_budget if time_budget is None else time_budget
        deadline = time.monotonic() + budget if budget else None
        store = self.checkpoint_store(spec, checkpoint)
        for size in range(self.min_size, max_size + 1):
            witnesses = [a for a in self.search_size(spec, size, store, deadline)
                         if is_lattice_distributive(a).failed]
            if witnesses:
                data = {'size': size, 'count': len(witnesses), 'max_size': max_size}
                return Report.value('smallest_nondistributive', data, certificate=witnesses[0],
                                    details={'witnesses': [w.name for w in witnesses],
                                             'checkpoint': str(store.path)})
        return Report.value('smallest_nondistributive', {'size': None, 'count': 0, 'max_size': max_size},
                            details={'checkpoint': str(store.path)})


# Theorem batteries

def _skip(reason: str):
    raise PreconditionError(reason)


def _translation_consistency(a: AlgebraTable, service: DecisionService, spec: SearchSpec) -> Report:
    """Involutive semiring iff the translated algebra is an involutive residuated lattice"""
    if a.has_negations and is_involutive_semiring(a).success:
        translated = invsr_to_irl(a).irl_reduct()
        report = is_involutive_rl(translated)
        if report.failed:
            return Report.failed_with('translation_consistency', f"translation is not involutive: {report.error}",
                                      report.witness)
    if a.zero is not None and residuals(a).success and is_involutive_rl(a).success:
        report = is_involutive_semiring(irl_to_invsr(a))
        if report.failed:
            return Report.failed_with('translation_consistency', f"translation is not involutive: {report.error}",
                                      report.witness)
    return Report.passed('translation_consistency')


def _class_agreement(a: AlgebraTable, service: DecisionService, spec: SearchSpec) -> Report:
    if not CLASS_PREDICATES[spec.algebra_class](a):
        return Report.failed_with('class_agreement', f"{a.name} fails the {spec.algebra_class.value} predicate")
    return Report.passed('class_agreement')


def _mult_idempotent_iff_boolean(a: AlgebraTable, service: DecisionService, spec: SearchSpec) -> Report:
    if is_one_bounded_involutive(with_derived_negations(a)).failed:
        _skip("needs a 1-bounded involutive semiring")
    idempotent, boolean = is_mult_idempotent(a).success, is_boolean_algebra(a).success
    if idempotent != boolean:
        return Report.failed_with('mult_idempotent_iff_boolean',
                                  f"mult idempotent={idempotent} but Boolean={boolean}")
    return Report.passed('mult_idempotent_iff_boolean', idempotent)


def _vn_regular_iff_npotent(a: AlgebraTable, service: DecisionService, spec: SearchSpec) -> Report:
    if is_one_bounded(a).failed:
        _skip("needs a 1-bounded semiring")
    max_power = service.settings.get_setting('decision', 'max_power', 4)
    for n in range(1, max_power + 1):
        regular_n, potent_n = is_n_vn_regular(a, n).success, is_n_potent(a, n).success
        if regular_n != potent_n:
            return Report.failed_with('vn_regular_iff_npotent',
                                      f"n={n}: vN-regular={regular_n} but n-potent={potent_n}", (n,))
    return Report.passed('vn_regular_iff_npotent')


def _npotent_selfinjective(a: AlgebraTable, service: DecisionService, spec: SearchSpec) -> Report:
    max_power = service.settings.get_setting('decision', 'max_power', 4)
    for n in range(1, max_power + 1):
        report = service.npotent_selfinjective_check(a, n)
        if report.failed:
            return report
    return Report.passed('npotent_selfinjective')


def _injective_via_regular_power(a: AlgebraTable, service: DecisionService, spec: SearchSpec) -> Report:
    a = with_derived_negations(a)
    for label, m in service.scope_modules(a):
        direct = service.is_injective(a, m, certify=False).success
        via_power = service.injective_via_regular_power(a, m).success
        if direct != via_power:
            return Report.failed_with('injective_via_regular_power',
                                      f"{label}: ideal embedding says {direct}, A^X says {via_power}", (label,))
    return Report.passed('injective_via_regular_power')


def _mv_consistency(a: AlgebraTable, service: DecisionService, spec: SearchSpec) -> Report:
    a = with_derived_negations(a)
    if a.rneg is None or a.zero is None:
        _skip("needs negations and a zero")
    mv = is_mv_semiring(a).success
    if mv and not (is_one_bounded_involutive(a).success and is_commutative(a).success):
        return Report.failed_with('mv_consistency', "MV-semiring that is not 1-bounded commutative involutive")
    if is_one_bounded_involutive(a).success and is_commutative(a).success:
        residuated = is_mv_algebra(a).success
        if mv != residuated:
            return Report.failed_with('mv_consistency', f"MV-semiring={mv} but MV-algebra={residuated}")
    return Report.passed('mv_consistency', mv)


def _on_negated(check: Callable[[AlgebraTable], Report]):
    return lambda a, service, spec: check(with_derived_negations(a))


CHECKS: Dict[str, Callable[[AlgebraTable, DecisionService, SearchSpec], Report]] = {
    'roundtrip_check': lambda a, service, spec: roundtrip_check(a),
    'identity_battery': _on_negated(identity_battery),
    'galois_check': lambda a, service, spec: galois_check(a),
    'interval_agreement': _on_negated(interval_agreement),
    'translation_consistency': _translation_consistency,
    'class_agreement': _class_agreement,
    'hom_id_iso_check': lambda a, service, spec: hom_id_iso_check(a),
    'phi_check': lambda a, service, spec: phi_check(a),
    'injective_iff_projective_check': lambda a, service, spec: service.injective_iff_projective_check(
        with_derived_negations(a)),
    'cyclic_trichotomy_check': lambda a, service, spec: service.cyclic_trichotomy_check(with_derived_negations(a)),
    'strong_iff_faithful_check': lambda a, service, spec: service.strong_iff_faithful_check(
        with_derived_negations(a)),
    'mult_idempotent_iff_boolean': _mult_idempotent_iff_boolean,
    'vn_regular_iff_npotent': _vn_regular_iff_npotent,
    'principal_ideal_equivalence_check': lambda a, service, spec: service.principal_ideal_equivalence_check(
        with_derived_negations(a)),
    'npotent_selfinjective_check': _npotent_selfinjective,
    'injective_via_regular_power_check': _injective_via_regular_power,
    'ideal_lattice_check': lambda a, service, spec: ideal_lattice_check(
        a, service.settings.get_setting('decision', 'ideal_family_limit', 12)),
    'mv_consistency': _mv_consistency,
}


def run_checks(payload: Dict[str, Any]) -> List[Dict[str, Any]]:
    """Outcome of each named check on one algebra; hypotheses that fail mean skip"""
    a = AlgebraTable.from_dict(payload['algebra'])
    spec = SearchSpec.model_validate(payload['spec'])
    service = _decision_service()
    outcomes = []
    for name in payload['checks']:
        try:
            report = CHECKS[name](a, service, spec)
            status = 'pass' if report.success else 'fail'
            outcomes.append({'check': name, 'status': status, 'error': report.error,
                             'witness': report.to_dict()['witness']})
        except (PreconditionError, UnsupportedError) as e:
            outcomes.append({'check': name, 'status': 'skip', 'error': str(e), 'witness': None})
    return outcomes


class BatteryService(BaseService):
    """Runs named theorem checks over an enumerated stream and aggregates verdicts"""

    def __init__(self, settings, enumeration_service: EnumerationService, resource_monitor=None,
                 performance_monitor=None):
        super().__init__()
        self.settings = settings
        self.enumeration_service = enumeration_service
        self.resource_monitor = resource_monitor
        self.performance_monitor = performance_monitor

    @property
    def monitor(self):
        """Get performance monitor decorator"""
        if self.performance_monitor is None:
            return lambda name: (lambda func: func)
        return self.performance_monitor.monitor

    def _validate(self, data: Dict[str, Any]) -> None:
        unknown = [name for name in data.get('checks', []) if name not in CHECKS]
        if unknown:
            raise InputError(f"unknown checks: {', '.join(unknown)}", {'known': sorted(CHECKS)})

    def theorem_battery(self, spec: SearchSpec, checks: Sequence[str],
                        algebras: Optional[Sequence[AlgebraTable]] = None) -> Report:
        return self.monitor("theorem_battery")(self._theorem_battery)(spec, list(checks), algebras)

    def _theorem_battery(self, spec: SearchSpec, checks: List[str],
                         algebras: Optional[Sequence[AlgebraTable]]) -> Report:
        validation = self.validate({'checks': checks})
        if validation.failed:
            raise InputError(validation.error, validation.details)
        summary = {name: {'pass': 0, 'fail': 0, 'skip': 0} for name in checks}
        if not checks:
            return Report.passed('battery', summary, details={'instances': 0})
        if algebras is None:
            algebras = list(self.enumeration_service.enumerate_algebras(spec))
        spec_data = spec.model_dump(by_alias=True, mode='json')
        payloads = [{'algebra': a.to_lists(), 'spec': spec_data, 'checks': checks} for a in algebras]
        results = (self.resource_monitor.map(run_checks, payloads, 'battery')
                   if self.resource_monitor else [run_checks(p) for p in payloads])
        first_failure = None
        for a, outcomes in zip(algebras, results):
            for outcome in outcomes:
                summary[outcome['check']][outcome['status']] += 1
                if outcome['status'] == 'fail' and first_failure is None:
                    first_failure = dict(outcome, algebra=a.name)
        details = {'instances': len(algebras), 'class': spec.algebra_class.value, 'max_size': spec.max_size}
        if first_failure is not None:
            return Report.failed_with('battery', f"{first_failure['check']} fails on {first_failure['algebra']}: "
                                      f"{first_failure['error']}", (first_failure['algebra'], first_failure['check']),
                                      data=summary, details=dict(details, first_failure=first_failure))
        return Report.passed('battery', summary, details=details)
