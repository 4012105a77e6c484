"""Built-in algebras and semimodules with the verdicts they are known to have"""
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Tuple, Union

from source.apps.axioms.services import resolve_predicate, with_derived_negations
from source.apps.core.exceptions import InputError
from source.apps.core.models import AlgebraTable
from source.apps.core.services import Report
from source.apps.core.tables import is_lattice_distributive
from source.apps.decide.services import (
    DecisionService,
    ideal_lattice_check,
    is_faithful,
    is_join_distributive,
    is_mid_complete,
    is_strong,
)
from source.apps.semimodules.models import SemimoduleTable
from source.apps.semimodules.services import (
    boolean_semifield,
    cyclic,
    free,
    hom_id_iso_check,
    phi_check,
    product_semiring,
    regular,
    validate_semimodule,
)
from source.apps.termeq.services import roundtrip_check

logger = logging.getLogger(__name__)

PUBLISHED = 'PUBLISHED'
DERIVED = 'DERIVED'
TRIVIAL = 'TRIVIAL'

Structure = Union[AlgebraTable, SemimoduleTable]


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    structure: Structure
    expected: Dict[str, Tuple[bool, str]] = field(default_factory=dict)


def three_element_chain() -> AlgebraTable:
    """0 < a < 1 with multiplication the meet"""
    return AlgebraTable.from_lists(
        'A3',
        join=[[0, 1, 2], [1, 1, 2], [2, 2, 2]],
        mult=[[0, 0, 0], [0, 1, 1], [0, 1, 2]],
        one=2, zero=0, display=['0', 'a', '1'],
    )


def four_element_chain() -> AlgebraTable:
    """0 < a < b < 1 with aa = ab = ba = 0 and bb = b"""
    return AlgebraTable.from_lists(
        'C4',
        join=[[0, 1, 2, 3], [1, 1, 2, 3], [2, 2, 2, 3], [3, 3, 3, 3]],
        mult=[[0, 0, 0, 0], [0, 0, 0, 1], [0, 0, 2, 2], [0, 1, 2, 3]],
        one=3, zero=0, lneg=[3, 2, 1, 0], rneg=[3, 2, 1, 0],
        display=['0', 'a', 'b', '1'],
    )


def lukasiewicz_chain() -> AlgebraTable:
    """The three-element MV chain 0 < h < 1 with hh = 0"""
    return AlgebraTable.from_lists(
        'L3',
        join=[[0, 1, 2], [1, 1, 2], [2, 2, 2]],
        mult=[[0, 0, 0], [0, 0, 1], [0, 1, 2]],
        one=2, zero=0, lneg=[2, 1, 0], rneg=[2, 1, 0],
        display=['0', 'h', '1'],
    )


def diamond_over(b: AlgebraTable) -> SemimoduleTable:
    """The non-distributive lattice M3 as a B-semimodule"""
    join = [[0, 1, 2, 3, 4],
            [1, 1, 4, 4, 4],
            [2, 4, 2, 4, 4],
            [3, 4, 4, 3, 4],
            [4, 4, 4, 4, 4]]
    return SemimoduleTable(name='M3', over=b, size=5, join=join, zero=0,
                           action=[[0, 0, 0, 0, 0], [0, 1, 2, 3, 4]],
                           display=('0', 'p', 'q', 'r', '1'))


def builtin_corpus() -> List[CorpusEntry]:
    b2 = boolean_semifield()
    return [
        CorpusEntry('B2', b2, {
            'is_boolean_algebra': (True, TRIVIAL),
            'is_semifield': (True, TRIVIAL),
            'is_one_bounded_involutive': (True, TRIVIAL),
            'is_n_potent:1': (True, TRIVIAL),
            'self_injective': (True, TRIVIAL),
            'principal_ideal_equivalence': (True, TRIVIAL),
            'roundtrip': (True, TRIVIAL),
            'hom_id_iso': (True, TRIVIAL),
        }),
        CorpusEntry('A3', three_element_chain(), {
            'projective:regular': (True, PUBLISHED),
            'injective:regular': (False, PUBLISHED),
            'self_injective': (False, PUBLISHED),
            'hom_id_iso': (True, PUBLISHED),
            'phi': (True, PUBLISHED),
            'is_involutive_rl': (False, PUBLISHED),
            'is_mult_idempotent': (True, DERIVED),
            'is_n_vn_regular:1': (True, DERIVED),
            'is_nilpotent_semiring': (False, DERIVED),
            'is_boolean_algebra': (False, DERIVED),
            'is_semifield': (False, DERIVED),
            'ideal_lattice': (True, DERIVED),
        }),
        CorpusEntry('C4', four_element_chain(), {
            'is_one_bounded_involutive': (True, PUBLISHED),
            'is_commutative': (True, PUBLISHED),
            'is_n_potent:2': (True, PUBLISHED),
            'is_n_potent:1': (False, DERIVED),
            'self_injective': (True, PUBLISHED),
            'injective:cyclic:0': (True, PUBLISHED),
            'projective:cyclic:0': (True, PUBLISHED),
            'injective:cyclic:b': (True, PUBLISHED),
            'projective:cyclic:b': (True, PUBLISHED),
            'injective:cyclic:a': (False, DERIVED),
            'projective:cyclic:a': (False, DERIVED),
            'faithful:cyclic:a': (False, DERIVED),
            'is_mv_semiring': (False, DERIVED),
            'is_boolean_algebra': (False, DERIVED),
            'is_mult_idempotent': (False, DERIVED),
            'is_nilpotent_semiring': (False, DERIVED),
            'cyclic_trichotomy': (True, PUBLISHED),
            'npotent_selfinjective:2': (True, PUBLISHED),
            'roundtrip': (True, DERIVED),
        }),
        CorpusEntry('L3', lukasiewicz_chain(), {
            'is_mv_semiring': (True, DERIVED),
            'is_mv_algebra': (True, DERIVED),
            'is_nilpotent_semiring': (True, DERIVED),
            'strong:regular': (True, DERIVED),
            'faithful:regular': (True, TRIVIAL),
            'roundtrip': (True, DERIVED),
        }),
        CorpusEntry('B2xB2', product_semiring([b2, b2], name='B2xB2'), {
            'is_boolean_algebra': (True, DERIVED),
            'principal_ideal_equivalence': (True, DERIVED),
            'self_injective': (True, DERIVED),
        }),
        CorpusEntry('M3', diamond_over(b2), {
            'validate_semimodule': (True, TRIVIAL),
            'mid_complete': (False, DERIVED),
            'join_distributive': (False, DERIVED),
            'is_lattice_distributive': (False, TRIVIAL),
        }),
    ]


def lookup(reference: str, corpus: Optional[Iterable[CorpusEntry]] = None) -> CorpusEntry:
    """Resolve 'corpus:NAME' (or a bare NAME) to its entry"""
    name = reference.split(':', 1)[1] if reference.startswith('corpus:') else reference
    entries = list(corpus) if corpus is not None else builtin_corpus()
    for entry in entries:
        if entry.name == name:
            return entry
    raise InputError(f"no corpus entry named {name!r}", {'known': [e.name for e in entries]})


def resolve_module(service: DecisionService, a: AlgebraTable, selector: str,
                   named: Optional[Dict[str, SemimoduleTable]] = None) -> SemimoduleTable:
    """regular, id, free:K, cyclic:I or the name of a semimodule in named"""
    kind, _, argument = selector.partition(':')
    if selector == 'regular':
        return regular(a)
    if selector == 'id':
        return service.id_module(a)
    if kind == 'free' and argument:
        try:
            return free(a, int(argument))
        except ValueError:
            raise InputError(f"free rank must be an integer, got {argument!r}")
    if kind == 'cyclic' and argument:
        return cyclic(a, a.index_of(argument))
    if named and selector in named:
        return named[selector]
    raise InputError(f"unknown module {selector!r}; use regular, id, free:K, cyclic:I or a semimodule name",
                     {'named': sorted(named or {})})


def _on_module(check: Callable[[AlgebraTable, SemimoduleTable, DecisionService], Report]):
    def run(a: AlgebraTable, argument: str, service: DecisionService) -> Report:
        return check(a, resolve_module(service, a, argument or 'regular'), service)
    return run


ALGEBRA_CHECKS: Dict[str, Callable[[AlgebraTable, str, DecisionService], Report]] = {
    'injective': _on_module(lambda a, m, service: service.is_injective(a, m)),
    'projective': _on_module(lambda a, m, service: service.is_projective(a, m)),
    'faithful': _on_module(lambda a, m, service: is_faithful(a, m)),
    'strong': _on_module(lambda a, m, service: is_strong(a, m)),
    'self_injective': lambda a, arg, service: service.is_self_injective(a),
    'hom_id_iso': lambda a, arg, service: hom_id_iso_check(a),
    'phi': lambda a, arg, service: phi_check(a),
    'roundtrip': lambda a, arg, service: roundtrip_check(a),
    'ideal_lattice': lambda a, arg, service: ideal_lattice_check(a, service.ideal_family_limit),
    'cyclic_trichotomy': lambda a, arg, service: service.cyclic_trichotomy_check(with_derived_negations(a)),
    'principal_ideal_equivalence': lambda a, arg, service: service.principal_ideal_equivalence_check(
        with_derived_negations(a)),
    'npotent_selfinjective': lambda a, arg, service: service.npotent_selfinjective_check(a, int(arg or 1)),
}

SEMIMODULE_CHECKS: Dict[str, Callable[[SemimoduleTable], Report]] = {
    'validate_semimodule': validate_semimodule,
    'mid_complete': is_mid_complete,
    'join_distributive': is_join_distributive,
    'is_lattice_distributive': is_lattice_distributive,
}

def run_check(structure: Structure, check: str, service: DecisionService) -> Report:
    """Evaluate a named check; 'name:argument' selects a module or a parameter"""
    if isinstance(structure, SemimoduleTable):
        if check not in SEMIMODULE_CHECKS:
            raise InputError(f"unknown semimodule check {check!r}", {'known': sorted(SEMIMODULE_CHECKS)})
        return SEMIMODULE_CHECKS[check](structure)
    base, _, argument = check.partition(':')
    if base in ALGEBRA_CHECKS:
        return ALGEBRA_CHECKS[base](structure, argument, service)
    return resolve_predicate(check)(structure)


def evaluate_expectations(entry: CorpusEntry, service: DecisionService) -> Report:
    """Reproduce every expected verdict of one entry"""
    results = {}
    mismatches = []
    for check, (expected, tag) in entry.expected.items():
        actual = run_check(entry.structure, check, service).success
        results[check] = {'expected': expected, 'actual': actual, 'tag': tag}
        if actual != expected:
            mismatches.append(check)
    if mismatches:
        first = mismatches[0]
        return Report.failed_with('corpus', f"{entry.name}: {first} expected {entry.expected[first][0]}, "
                                  f"got {results[first]['actual']}", (entry.name, first),
                                  data=results, details={'mismatches': mismatches})
    logger.debug(f"{entry.name}: {len(results)} expectations hold")
    return Report.passed('corpus', results)
