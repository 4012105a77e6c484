"""Injectivity, projectivity and the semimodule theorems as executable checks.

Both retract searches use the same observation: a homomorphism out of (or
into) a finite product is the join of its component homomorphisms, and the
components compatible with a fixed embedding or surjection are closed under
pointwise join. So each component has a greatest compatible choice and the
retraction exists exactly when those greatest choices reassemble the identity.
"""
import hashlib
import itertools
import logging
from functools import reduce
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from source.apps.axioms.services import (
    is_boolean_algebra,
    is_n_potent,
    is_n_vn_regular,
    is_nilpotent_semiring,
    is_one_bounded,
    is_one_bounded_involutive,
    powers,
    with_derived_negations,
)
from source.apps.core.exceptions import ConsistencyError, InputError, PreconditionError, UnsupportedError
from source.apps.core.models import INDEX_DTYPE, AlgebraTable
from source.apps.core.services import BaseService, LoggingService, Report
from source.apps.core.tables import (
    first_violation,
    greatest_element,
    is_lattice_distributive,
    join_table,
    least_element,
    leq_matrix,
    meet_from_join,
    require_least,
)
from source.apps.semimodules.models import HomKind, HomMap, SemimoduleTable
from source.apps.semimodules.services import (
    cyclic,
    enumerate_homs,
    find_isomorphism,
    free,
    generating_sequence,
    id_semimodule,
    ideal_generators,
    product,
    product_semiring,
    regular,
    restrict,
    subsemimodules,
    validate_semimodule,
)
from .models import Retraction

logger = logging.getLogger(__name__)


def _require(report: Report, operation: str) -> Report:
    if report.failed:
        raise PreconditionError(f"{operation}: {report.name} fails ({report.error})", report)
    return report


def _join_rows(join: np.ndarray, start: int, rows: np.ndarray, width: int) -> np.ndarray:
    """Pointwise join of the given rows, starting from the constant map to start"""
    return reduce(lambda acc, row: join[acc, row], rows, np.full(width, start, dtype=INDEX_DTYPE))


def _fingerprint(structure: Any) -> str:
    digest = hashlib.sha1()
    if isinstance(structure, SemimoduleTable):
        digest.update(_fingerprint(structure.over).encode())
        tables = (structure.join, structure.action, np.array([structure.zero]))
    else:
        constants = [structure.one, -1 if structure.zero is None else structure.zero]
        tables = (structure.join, structure.mult, np.array(constants))
    for table in tables:
        digest.update(np.ascontiguousarray(table, dtype=INDEX_DTYPE).tobytes())
    return f"{structure.size}:{digest.hexdigest()[:16]}"


# Lattice-level checks

def is_mid_complete(structure: Any) -> Report:
    """m v (x ^ y) = (m v x) ^ (m v y) everywhere.

    A finite join-semilattice with least element is a complete lattice, and the
    infinite identity follows from the binary one by induction (the empty
    family gives m v top = top).
    """
    join = join_table(structure)
    meet = meet_from_join(join)
    for m in range(join.shape[0]):
        lhs = join[m, meet]
        rhs = meet[join[m][:, None], join[m][None, :]]
        witness = first_violation(lhs != rhs)
        if witness is not None:
            return Report.failed_with('mid_complete', f"m v (x ^ y) differs from (m v x) ^ (m v y) at {(m,) + witness}",
                                      (m,) + witness)
    return Report.passed('mid_complete')


def is_join_distributive(structure: Any) -> Report:
    """a <= b0 v b1 implies a = (a ^ b0) v (a ^ b1)"""
    join = join_table(structure)
    meet = meet_from_join(join)
    leq = leq_matrix(join)
    for a in range(join.shape[0]):
        covered = leq[a, join]
        split = join[meet[a][:, None], meet[a][None, :]]
        witness = first_violation(covered & (split != a))
        if witness is not None:
            return Report.failed_with('join_distributive', f"{a} below {witness[0]} v {witness[1]} does not split",
                                      (a,) + witness)
    return Report.passed('join_distributive')


def is_faithful(a: AlgebraTable, m: SemimoduleTable) -> Report:
    """Every scalar other than the least element moves some x off zero"""
    bottom = require_least(a, 'is_faithful')
    annihilates = (m.action == m.zero).all(axis=1)
    annihilates[bottom] = False
    witness = first_violation(annihilates)
    if witness is not None:
        return Report.failed_with('faithful', f"{a.element_name(witness[0])} acts as zero", witness)
    return Report.passed('faithful')


def is_strong(a: AlgebraTable, m: SemimoduleTable) -> Report:
    """Scalars acting identically on m have negations acting identically on m"""
    a = with_derived_negations(a)
    if not a.has_negations:
        raise UnsupportedError("is_strong needs negations (declared or derived from residuals)",
                               {'algebra': a.name})
    same = (m.action[:, None, :] == m.action[None, :, :]).all(axis=2)
    for label, neg in (('-', a.rneg), ('~', a.lneg)):
        witness = first_violation(same & ~same[neg[:, None], neg[None, :]])
        if witness is not None:
            c, d = witness
            return Report.failed_with('strong', f"{a.element_name(c)} and {a.element_name(d)} act alike "
                                      f"but {label}{a.element_name(c)} and {label}{a.element_name(d)} do not",
                                      witness, details={'negation': label})
    return Report.passed('strong')


def _families(k: int, limit: int):
    if k <= limit:
        for r in range(k + 1):
            yield from itertools.combinations(range(k), r)
    else:
        yield ()
        yield from itertools.combinations_with_replacement(range(k), 2)


def ideal_lattice_check(structure: Any, family_limit: int = 12) -> Report:
    """Ideals under reverse inclusion: joins are intersections, and MID holds when join-distributive"""
    join = join_table(structure)
    n = join.shape[0]
    leq = leq_matrix(join)
    meet = meet_from_join(join)
    bottom, top = least_element(join), greatest_element(join)
    gens = np.array(ideal_generators(join), dtype=INDEX_DTYPE)
    downsets = leq[:, gens].T
    distributive = is_join_distributive(join).success
    ar = np.arange(n)
    checked = 0
    for family in _families(len(gens), family_limit):
        chosen = gens[list(family)]
        checked += 1
        members = np.logical_and.reduce(downsets[list(family)], axis=0) if family else np.ones(n, dtype=bool)
        glb = reduce(lambda x, y: int(meet[x, y]), chosen, top)
        if not np.array_equal(members, leq[:, glb]):
            return Report.failed_with('ideal_lattice', "intersection of ideals is not the ideal join",
                                      tuple(int(g) for g in chosen), details={'part': 'completeness'})
        if distributive:
            generated = reduce(lambda x, y: int(join[x, y]), chosen, bottom)
            lhs = meet[ar, generated]
            rhs = reduce(lambda acc, g: join[acc, meet[ar, g]], chosen, np.full(n, bottom, dtype=INDEX_DTYPE))
            witness = first_violation(lhs != rhs)
            if witness is not None:
                return Report.failed_with('ideal_lattice', "J v meet(J_i) differs from meet(J v J_i)",
                                          witness + tuple(int(g) for g in chosen), details={'part': 'mid'})
    details = {'ideals': len(gens), 'families': checked,
               'exhaustive': len(gens) <= family_limit, 'mid_checked': distributive}
    return Report.passed('ideal_lattice', checked, details=details)


def mid_retract_check(r: Retraction) -> Report:
    """A retract of a MID-complete semimodule is MID-complete"""
    outer = is_mid_complete(r.outer)
    if outer.failed:
        return Report.passed('mid_retract', details={'outer_mid': False})
    inner = is_mid_complete(r.inner)
    if inner.failed:
        return Report.failed_with('mid_retract', f"{r.inner.name} is not MID-complete: {inner.error}",
                                  inner.witness, details={'outer_mid': True})
    return Report.passed('mid_retract', details={'outer_mid': True})


def _product_elements(sizes: Sequence[int]) -> np.ndarray:
    """Coordinates of every element of a product, in the order product() numbers them"""
    if not sizes:
        return np.zeros((1, 0), dtype=INDEX_DTYPE)
    return np.array(np.unravel_index(np.arange(int(np.prod(sizes))), sizes), dtype=INDEX_DTYPE).T


def _product_index(coordinates: np.ndarray, sizes: Sequence[int]) -> np.ndarray:
    """Row i of coordinates holds coordinate i of every element"""
    if not sizes:
        return np.zeros(coordinates.shape[1], dtype=INDEX_DTYPE)
    return np.ravel_multi_index(tuple(coordinates), sizes)


class DecisionService(BaseService):
    """Retract searches against canonical injective and free objects"""

    def __init__(self, settings, cache_manager=None, performance_monitor=None, resource_monitor=None):
        super().__init__(cache_manager)
        self.settings = settings
        self.performance_monitor = performance_monitor
        self.resource_monitor = resource_monitor
        decision = settings.get_decision_settings()
        self.free_rank_scope = decision.get('free_rank_scope', 2)
        self.certificate_max_size = decision.get('certificate_max_size', 1024)
        self.ideal_family_limit = decision.get('ideal_family_limit', 12)

    @property
    def monitor(self):
        """Get performance monitor decorator"""
        if self.performance_monitor is None:
            return lambda name: (lambda func: func)
        return self.performance_monitor.monitor

    def _validate(self, data: Dict[str, Any]) -> None:
        a, m = data.get('algebra'), data.get('module')
        if not isinstance(a, AlgebraTable):
            raise InputError("an algebra table is required")
        if m is not None:
            if not isinstance(m, SemimoduleTable):
                raise InputError("module must be a semimodule table")
            if m.over != a:
                raise InputError(f"{m.name} is a semimodule over {m.over.name}, not {a.name}")

    def _checked_input(self, a: AlgebraTable, m: SemimoduleTable, operation: str) -> None:
        validation = self.validate({'algebra': a, 'module': m})
        if validation.failed:
            raise InputError(f"{operation}: {validation.error}", validation.details)
        _require(validate_semimodule(m), operation)

    # Cached derived objects

    def id_module(self, a: AlgebraTable) -> SemimoduleTable:
        return self.get_cached(f"id:{_fingerprint(a)}", lambda: id_semimodule(a))

    def hom_table(self, dom: SemimoduleTable, cod: SemimoduleTable) -> np.ndarray:
        """Every A-hom dom -> cod, one per row"""
        def create():
            rows = [hom.map for hom in enumerate_homs(dom, cod, HomKind.MODULE)]
            return np.array(rows, dtype=INDEX_DTYPE).reshape(len(rows), dom.size)
        return self.get_cached(f"homs:{_fingerprint(dom)}:{_fingerprint(cod)}", create)

    def scope_modules(self, a: AlgebraTable) -> List[Tuple[str, SemimoduleTable]]:
        """regular(a), its proper subsemimodules, then every subsemimodule of free(a, k), k = 2..scope"""
        def create():
            reg = regular(a)
            modules = [(reg.name, reg)]
            ambients = [reg] + [free(a, k) for k in range(2, self.free_rank_scope + 1)]
            for ambient in ambients:
                for subset in subsemimodules(ambient):
                    if ambient is reg and len(subset) == reg.size:
                        continue
                    label = f"{ambient.name}{{{','.join(ambient.element_name(x) for x in subset)}}}"
                    modules.append((label, restrict(ambient, subset, name=label)))
            return modules
        return self.get_cached(f"scope:{self.free_rank_scope}:{_fingerprint(a)}", create)

    # Injectivity

    def embedding(self, a: AlgebraTable, m: SemimoduleTable) -> Tuple[np.ndarray, List[int]]:
        """Coordinates of x -> ({c | c.x <= y})_y over the ideal generators y of m, as Id(A) indices"""
        bottom = require_least(a, 'embedding')
        ys = np.array(ideal_generators(m), dtype=INDEX_DTYPE)
        leq = leq_matrix(m.join)
        below = leq[m.action[:, :, None], ys[None, None, :]]
        generator = np.full((m.size, len(ys)), bottom, dtype=INDEX_DTYPE)
        for c in range(a.size):
            generator = np.where(below[c], a.join[generator, c], generator)
        position = np.empty(a.size, dtype=INDEX_DTYPE)
        position[ideal_generators(a)] = np.arange(a.size)
        return position[generator.T], [int(y) for y in ys]

    def verify_embedding(self, ideal_module: SemimoduleTable, m: SemimoduleTable, eps: np.ndarray) -> None:
        """Raise ConsistencyError unless every coordinate is an A-hom and the columns separate points"""
        for i, coordinate in enumerate(eps):
            hom = HomMap(m, ideal_module, tuple(coordinate), HomKind.MODULE)
            report = hom.check()
            if report.failed:
                raise ConsistencyError(f"embedding coordinate {i} of {m.name} is not an A-hom: {report.error}",
                                       {'coordinate': i, 'witness': report.witness})
        if len({tuple(column) for column in eps.T.tolist()}) < m.size:
            raise ConsistencyError(f"embedding of {m.name} is not injective", {'module': m.name})

    def is_injective(self, a: AlgebraTable, m: SemimoduleTable, certify: bool = True) -> Report:
        return self.monitor("is_injective")(self._is_injective)(a, m, certify)

    def _is_injective(self, a: AlgebraTable, m: SemimoduleTable, certify: bool) -> Report:
        self._checked_input(a, m, 'is_injective')
        ideal_module = self.id_module(a)
        eps, ys = self.embedding(a, m)
        self.verify_embedding(ideal_module, m, eps)
        homs = self.hom_table(ideal_module, m)
        leq = leq_matrix(m.join)
        ar = np.arange(m.size)
        # compatible[k, i]: hom k sends coordinate i of every x below x
        compatible = leq[homs[:, eps], ar[None, None, :]].all(axis=2)
        best = np.array([_join_rows(m.join, m.zero, homs[compatible[:, i]], ideal_module.size)
                         for i in range(len(ys))], dtype=INDEX_DTYPE).reshape(len(ys), ideal_module.size)
        total = _join_rows(m.join, m.zero, best[np.arange(len(ys))[:, None], eps], m.size)
        data = {'index_set': len(ys), 'homs': len(homs)}
        miss = first_violation(total != ar)
        if miss is not None:
            x = miss[0]
            return Report.failed_with('injective', f"no retraction of the ideal embedding recovers "
                                      f"{m.element_name(x)}", (x,), data=data)
        certificate = None
        if certify and ideal_module.size ** len(ys) <= self.certificate_max_size:
            certificate = self._injective_certificate(ideal_module, m, eps, best)
        return Report.passed('injective', data, certificate=certificate)

    def _injective_certificate(self, ideal_module, m, eps, best) -> Retraction:
        sizes = [ideal_module.size] * len(eps)
        outer = product([ideal_module] * len(eps), name=f"{ideal_module.name}^{len(eps)}")
        coordinates = _product_elements(sizes)
        retract = _join_rows(m.join, m.zero, best[np.arange(len(eps))[:, None], coordinates.T], outer.size)
        retraction = Retraction(HomMap(m, outer, tuple(_product_index(eps, sizes))),
                                HomMap(outer, m, tuple(retract)))
        return self._verified(retraction)

    def _verified(self, retraction: Retraction) -> Retraction:
        report = retraction.verify()
        if report.failed:
            raise ConsistencyError(f"retraction certificate fails: {report.error}", {'witness': report.witness})
        return retraction

    def is_self_injective(self, a: AlgebraTable) -> Report:
        report = self.is_injective(a, regular(a))
        report.name = 'self_injective'
        return report

    def injective_via_regular_power(self, a: AlgebraTable, m: SemimoduleTable) -> Report:
        """Injectivity as a retract of A^X, moving the ideal embedding through down(-x) -> x"""
        _require(is_one_bounded_involutive(a), 'injective_via_regular_power')
        self._checked_input(a, m, 'injective_via_regular_power')
        eps, ys = self.embedding(a, m)
        # down(g) = down(-x) exactly when x = ~g
        generators = np.array(ideal_generators(a), dtype=INDEX_DTYPE)
        scalars = a.lneg[generators[eps]]
        leq = leq_matrix(m.join)
        ar = np.arange(m.size)
        # An A-hom A -> M is c -> c.y, so each coordinate picks one y
        compatible = leq[m.action[scalars[:, :, None], ar[None, None, :]], ar[None, :, None]].all(axis=1)
        best = [reduce(lambda acc, y: int(m.join[acc, y]), np.flatnonzero(compatible[i]), m.zero)
                for i in range(len(ys))]
        total = reduce(lambda acc, i: m.join[acc, m.action[scalars[i], best[i]]], range(len(ys)),
                       np.full(m.size, m.zero, dtype=INDEX_DTYPE))
        miss = first_violation(total != ar)
        data = {'index_set': len(ys), 'components': [int(y) for y in best]}
        if miss is not None:
            return Report.failed_with('injective_via_regular_power',
                                      f"no retraction of A^{len(ys)} recovers {m.element_name(miss[0])}",
                                      miss, data=data)
        return Report.passed('injective_via_regular_power', data)

    # Projectivity

    def projective_generators(self, m: SemimoduleTable) -> List[int]:
        return generating_sequence(m, HomKind.MODULE)

    def is_projective(self, a: AlgebraTable, m: SemimoduleTable,
                      generators: Optional[Sequence[int]] = None, certify: bool = True) -> Report:
        return self.monitor("is_projective")(self._is_projective)(a, m, generators, certify)

    def _is_projective(self, a: AlgebraTable, m: SemimoduleTable,
                       generators: Optional[Sequence[int]], certify: bool) -> Report:
        self._checked_input(a, m, 'is_projective')
        gens = np.array(self.projective_generators(m) if generators is None else list(generators),
                        dtype=INDEX_DTYPE)
        reg = regular(a)
        bottom = reg.zero
        homs = self.hom_table(m, reg)
        leq = leq_matrix(m.join)
        ar = np.arange(m.size)
        # compatible[k, j]: hom k scaled onto generator j stays below the identity
        compatible = leq[m.action[homs[:, :, None], gens[None, None, :]], ar[None, :, None]].all(axis=1)
        best = np.array([_join_rows(a.join, bottom, homs[compatible[:, j]], m.size) for j in range(len(gens))],
                        dtype=INDEX_DTYPE).reshape(len(gens), m.size)
        total = _join_rows(m.join, m.zero, m.action[best, gens[:, None]], m.size)
        data = {'generators': [int(g) for g in gens], 'homs': len(homs)}
        miss = first_violation(total != ar)
        if miss is not None:
            x = miss[0]
            return Report.failed_with('projective', f"no section of the free cover recovers {m.element_name(x)}",
                                      (x,), data=data)
        certificate = None
        if certify and a.size ** len(gens) <= self.certificate_max_size:
            certificate = self._projective_certificate(a, m, gens, best)
        return Report.passed('projective', data, certificate=certificate)

    def _projective_certificate(self, a, m, gens, best) -> Retraction:
        sizes = [a.size] * len(gens)
        outer = free(a, len(gens))
        coordinates = _product_elements(sizes)
        cover = _join_rows(m.join, m.zero, m.action[coordinates.T, gens[:, None]], outer.size)
        retraction = Retraction(HomMap(m, outer, tuple(_product_index(best, sizes))),
                                HomMap(outer, m, tuple(cover)))
        return self._verified(retraction)

    # Theorem checks

    def _agreement(self, name: str, rows: List[Tuple[str, Dict[str, bool]]], details: Dict) -> Report:
        disagreements = [label for label, verdicts in rows if len(set(verdicts.values())) > 1]
        details = dict(details, checked=len(rows), disagreements=disagreements,
                       verdicts={label: verdicts for label, verdicts in rows})
        if disagreements:
            return Report.failed_with(name, f"verdicts disagree on {disagreements[0]}",
                                      (disagreements[0],), details=details)
        return Report.passed(name, len(rows), details=details)

    def injective_iff_projective_check(self, a: AlgebraTable, force: bool = False) -> Report:
        if not force:
            _require(is_one_bounded_involutive(a), 'injective_iff_projective_check')
        rows = []
        for label, m in self.scope_modules(a):
            rows.append((label, {
                'injective': self.is_injective(a, m, certify=False).success,
                'projective': self.is_projective(a, m, certify=False).success,
            }))
        LoggingService.log_debug("injective/projective agreement", extra={'algebra': a.name, 'modules': len(rows)})
        return self._agreement('injective_iff_projective', rows, {'scope': self.free_rank_scope})

    def cyclic_trichotomy_check(self, a: AlgebraTable, force: bool = False) -> Report:
        """A cyclic Ax: isomorphic to some Au with uu = u, projective, injective"""
        if not force:
            _require(is_one_bounded_involutive(a), 'cyclic_trichotomy_check')
        idempotents = [u for u in range(a.size) if a.mult[u, u] == u]
        targets = [cyclic(a, u) for u in idempotents]
        rows = []
        for x in range(a.size):
            m = cyclic(a, x)
            rows.append((m.name, {
                'idempotent_generated': any(find_isomorphism(m, t) is not None for t in targets),
                'projective': self.is_projective(a, m, certify=False).success,
                'injective': self.is_injective(a, m, certify=False).success,
            }))
        return self._agreement('cyclic_trichotomy', rows, {'idempotents': idempotents})

    def strong_iff_faithful_check(self, a: AlgebraTable) -> Report:
        _require(is_nilpotent_semiring(a), 'strong_iff_faithful_check')
        _require(is_one_bounded_involutive(a), 'strong_iff_faithful_check')
        rows = [(label, {'strong': is_strong(a, m).success, 'faithful': is_faithful(a, m).success})
                for label, m in self.scope_modules(a) if not m.is_trivial]
        return self._agreement('strong_iff_faithful', rows, {'scope': self.free_rank_scope})

    def principal_ideal_equivalence_check(self, a: AlgebraTable) -> Report:
        _require(is_one_bounded_involutive(a), 'principal_ideal_equivalence_check')
        principal = all(self.is_injective(a, cyclic(a, x), certify=False).success for x in range(a.size))
        regular_self_injective = (self.is_self_injective(a).success and is_n_vn_regular(a, 1).success)
        verdicts = {
            'principal_ideals_injective': principal,
            'self_injective_vn_regular': regular_self_injective,
            'boolean_algebra': is_boolean_algebra(a).success,
        }
        return self._agreement('principal_ideal_equivalence', [(a.name, verdicts)], {})

    def npotent_selfinjective_check(self, a: AlgebraTable, n: int) -> Report:
        _require(is_one_bounded(a), 'npotent_selfinjective_check')
        cyclic_powers = {int(p) for p in powers(a, n)}
        injective_powers = {p: self.is_injective(a, cyclic(a, p), certify=False).success for p in sorted(cyclic_powers)}
        verdicts = {
            'power_cyclics_injective': all(injective_powers.values()),
            'self_injective_n_potent': self.is_self_injective(a).success and is_n_potent(a, n).success,
        }
        return self._agreement(f'npotent_selfinjective:{n}', [(a.name, verdicts)],
                               {'n': n, 'power_cyclics': injective_powers})

    def product_selfinjective_check(self, algebras: Sequence[AlgebraTable]) -> Report:
        if not algebras:
            raise InputError("product_selfinjective_check needs at least one factor")
        whole = algebras[0] if len(algebras) == 1 else product_semiring(algebras)
        factors = {f.name: self.is_self_injective(f).success for f in algebras}
        verdicts = {'product': self.is_self_injective(whole).success, 'factors': all(factors.values())}
        return self._agreement('product_selfinjective', [(whole.name, verdicts)], {'factors': factors})

    def injective_mid_check(self, a: AlgebraTable, m: SemimoduleTable) -> Report:
        """Over a distributive A, an injective semimodule is MID-complete"""
        _require(is_lattice_distributive(a), 'injective_mid_check')
        report = self.is_injective(a, m)
        if report.failed:
            return Report.passed('injective_mid', details={'injective': False})
        mid = is_mid_complete(m)
        if mid.failed:
            return Report.failed_with('injective_mid', f"injective {m.name} is not MID-complete: {mid.error}",
                                      mid.witness, details={'injective': True})
        if report.certificate is not None:
            retract = mid_retract_check(report.certificate)
            if retract.failed:
                return Report.failed_with('injective_mid', retract.error, retract.witness)
        return Report.passed('injective_mid', details={'injective': True})
