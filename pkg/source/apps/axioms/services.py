"""Class predicates for finite semirings and pointed residuated join-semilattices.

Every predicate returns a Report; failures carry the lexicographically first
violating tuple as witness.
"""
import logging
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from source.apps.core.exceptions import InputError, UnsupportedError
from source.apps.core.models import INDEX_DTYPE, AlgebraTable
from source.apps.core.services import Report
from source.apps.core.tables import (
    first_violation,
    greatest_element,
    is_lattice_distributive,
    leq_matrix,
    least_element,
    meet_from_join,
    require_least,
    validate,
)

logger = logging.getLogger(__name__)


def _require_zero(a: AlgebraTable, operation: str) -> int:
    if a.zero is None:
        raise UnsupportedError(f"{operation} needs a declared zero", {'algebra': a.name})
    return a.zero


def _require_negations(a: AlgebraTable, operation: str) -> Tuple[np.ndarray, np.ndarray]:
    if not a.has_negations:
        raise UnsupportedError(f"{operation} needs lneg and rneg tables", {'algebra': a.name})
    return a.lneg, a.rneg


def _renamed(report: Report, name: str) -> Report:
    report.name = name
    return report


def _check_masks(name: str, checks) -> Report:
    for label, mask in checks:
        witness = first_violation(mask)
        if witness is not None:
            return Report.failed_with(name, f"{label} fails at {witness}", witness, details={'law': label})
    return Report.passed(name)


def is_idempotent_semiring(a: AlgebraTable) -> Report:
    zero = _require_zero(a, 'is_idempotent_semiring')
    base = validate(a)
    if base.failed:
        return _renamed(base, 'idempotent_semiring')
    ar = np.arange(a.size)
    return _check_masks('idempotent_semiring', (
        ('x v 0 = x', a.join[:, zero] != ar),
        ('x0 = 0', a.mult[:, zero] != zero),
        ('0x = 0', a.mult[zero, :] != zero),
        ('1 v 1 = 1', np.array([a.join[a.one, a.one] != a.one])),
    ))


def is_one_bounded(a: AlgebraTable) -> Report:
    return _check_masks('one_bounded', (('x v 1 = 1', a.join[:, a.one] != a.one),))


def is_commutative(a: AlgebraTable) -> Report:
    return _check_masks('commutative', (('xy = yx', a.mult != a.mult.T),))


def residual_tables(a: AlgebraTable) -> Tuple[np.ndarray, np.ndarray]:
    """x\\z = join{y | xy <= z} and z/y = join{x | xy <= z}, unverified"""
    n = a.size
    bottom = require_least(a, 'residuals')
    leq = leq_matrix(a.join)
    # below[x, y, z]: xy <= z
    below = leq[a.mult[:, :, None], np.arange(n)[None, None, :]]
    lres = np.full((n, n), bottom, dtype=INDEX_DTYPE)
    rres = np.full((n, n), bottom, dtype=INDEX_DTYPE)
    for y in range(n):
        lres = np.where(below[:, y, :], a.join[lres, y], lres)
    for x in range(n):
        rres = np.where(below[x, :, :].T, a.join[rres, x], rres)
    return lres, rres


def residuals(a: AlgebraTable) -> Report:
    """Residual tables, verified against xy <= z iff x <= z/y iff y <= x\\z"""
    n = a.size
    lres, rres = residual_tables(a)
    leq = leq_matrix(a.join)
    ar = np.arange(n)
    product_below = leq[a.mult[:, :, None], ar[None, None, :]]
    via_right = leq[ar[:, None, None], rres.T[None, :, :]]
    via_left = leq[ar[None, :, None], lres[:, None, :]]
    witness = first_violation((product_below != via_right) | (product_below != via_left))
    if witness is not None:
        return Report.failed_with('residuals', f"residuation fails at {witness}", witness)
    return Report.passed('residuals', (lres, rres))


def derived_negations(a: AlgebraTable, zero: Optional[int] = None) -> Optional[Tuple[np.ndarray, np.ndarray]]:
    """(~x = x\\0, -x = 0/x) from verified residuals, or None if not residuated"""
    zero = _require_zero(a, 'derived_negations') if zero is None else zero
    report = residuals(a)
    if report.failed:
        return None
    lres, rres = report.data
    return lres[:, zero].copy(), rres[zero, :].copy()


def is_involutive_semiring(a: AlgebraTable) -> Report:
    """x <= y iff x~y <= -1 iff -y x <= -1, over a 0-free idempotent semiring"""
    lneg, rneg = _require_negations(a, 'is_involutive_semiring')
    base = validate(a)
    if base.failed:
        return _renamed(base, 'involutive_semiring')
    minus_one = int(rneg[a.one])
    if a.zero is not None and a.zero != minus_one:
        return Report.failed_with('involutive_semiring',
                                  f"zero {a.zero} differs from -1 = {minus_one}", (a.zero, minus_one),
                                  details={'law': '0 = -1'})
    leq = leq_matrix(a.join)
    left = leq[a.mult[:, lneg], minus_one]          # [x, y]: x~y <= -1
    right = leq[a.mult[rneg, :], minus_one].T       # [x, y]: -y x <= -1
    return _check_masks('involutive_semiring', (
        ('x <= y iff x~y <= -1', leq != left),
        ('x <= y iff -y x <= -1', leq != right),
    ))


def is_one_bounded_involutive(a: AlgebraTable) -> Report:
    """x <= y iff x~y = 0 iff -y x = 0, with 0 the bottom"""
    lneg, rneg = _require_negations(a, 'is_one_bounded_involutive')
    zero = _require_zero(a, 'is_one_bounded_involutive')
    base = validate(a)
    if base.failed:
        return _renamed(base, 'one_bounded_involutive')
    if least_element(a) != zero:
        return Report.failed_with('one_bounded_involutive', f"zero {zero} is not the bottom", (zero,),
                                  details={'law': '0 is the bottom'})
    leq = leq_matrix(a.join)
    left = a.mult[:, lneg] == zero
    right = (a.mult[rneg, :] == zero).T
    return _check_masks('one_bounded_involutive', (
        ('x <= y iff x~y = 0', leq != left),
        ('x <= y iff -y x = 0', leq != right),
    ))


def is_involutive_rl(a: AlgebraTable) -> Report:
    """~-x = x = -~x with ~x = x\\0 and -x = 0/x computed from residuals"""
    zero = _require_zero(a, 'is_involutive_rl')
    report = residuals(a)
    if report.failed:
        return _renamed(report, 'involutive_rl')
    lres, rres = report.data
    lneg = lres[:, zero]
    rneg = rres[zero, :]
    ar = np.arange(a.size)
    return _check_masks('involutive_rl', (
        ('~-x = x', lneg[rneg] != ar),
        ('-~x = x', rneg[lneg] != ar),
    ))


def is_mv_semiring(a: AlgebraTable) -> Report:
    """x <= y iff x(-y) = 0, and x v y = -(-x . -(-x . y))"""
    if a.rneg is None:
        raise UnsupportedError("is_mv_semiring needs an rneg table", {'algebra': a.name})
    zero = _require_zero(a, 'is_mv_semiring')
    for pre in (is_idempotent_semiring(a), is_commutative(a)):
        if pre.failed:
            return _renamed(pre, 'mv_semiring')
    rneg = a.rneg
    leq = leq_matrix(a.join)
    order = a.mult[:, rneg] == zero
    inner = rneg[a.mult[rneg[:, None], np.arange(a.size)[None, :]]]   # -(-x . y)
    mv_join = rneg[a.mult[rneg[:, None], inner]]
    return _check_masks('mv_semiring', (
        ('x <= y iff x(-y) = 0 or x v y = -(-x . -(-x . y))', (leq != order) | (a.join != mv_join)),
    ))


def is_mv_algebra(a: AlgebraTable) -> Report:
    """Residuated form: 1-bounded commutative involutive with x v y = (x/y)\\x"""
    _require_zero(a, 'is_mv_algebra')
    for pre in (is_one_bounded(a), is_commutative(a), is_involutive_rl(a)):
        if pre.failed:
            return _renamed(pre, 'mv_algebra')
    if least_element(a) != a.zero:
        return Report.failed_with('mv_algebra', f"zero {a.zero} is not the bottom", (a.zero,))
    lres, rres = residuals(a).data
    ar = np.arange(a.size)
    return _check_masks('mv_algebra', (
        ('x v y = (x/y)\\x', a.join != lres[rres, ar[:, None]]),
    ))


def powers(a: AlgebraTable, k: int) -> np.ndarray:
    """Vector of x^k"""
    if k < 1:
        raise InputError(f"exponent must be positive, got {k}")
    ar = np.arange(a.size)
    result = ar.copy()
    for _ in range(k - 1):
        result = a.mult[result, ar]
    return result


def is_n_potent(a: AlgebraTable, n: int) -> Report:
    name = f'n_potent:{n}'
    p = powers(a, n)
    return _check_masks(name, ((f'x^{n} = x^{n + 1}', p != a.mult[p, np.arange(a.size)]),))


def is_n_vn_regular(a: AlgebraTable, n: int) -> Report:
    name = f'n_vn_regular:{n}'
    p = powers(a, n)
    candidates = a.mult[a.mult[p[:, None], np.arange(a.size)[None, :]], p[:, None]]
    solvable = (candidates == p[:, None]).any(axis=1)
    return _check_masks(name, ((f'x^{n} = x^{n} b x^{n} for some b', ~solvable),))


def is_nilpotent_semiring(a: AlgebraTable) -> Report:
    """Every x != 1 has x^k = 0 for some k <= |A|"""
    zero = _require_zero(a, 'is_nilpotent_semiring')
    ar = np.arange(a.size)
    current = ar.copy()
    vanishes = current == zero
    for _ in range(a.size - 1):
        current = a.mult[current, ar]
        vanishes |= current == zero
    return _check_masks('nilpotent', (('x^k = 0 for some k', ~vanishes & (ar != a.one)),))


def is_mult_idempotent(a: AlgebraTable) -> Report:
    return _check_masks('mult_idempotent', (('xx = x', np.diag(a.mult) != np.arange(a.size)),))


def is_boolean_algebra(a: AlgebraTable) -> Report:
    """Distributive, bounded, complemented, and mult is the lattice meet"""
    zero = _require_zero(a, 'is_boolean_algebra')
    bottom = least_element(a)
    top = greatest_element(a)
    if bottom != zero or top is None:
        return Report.failed_with('boolean_algebra', f"zero {zero} is not the bottom", (zero,))
    distributive = is_lattice_distributive(a)
    if distributive.failed:
        return _renamed(distributive, 'boolean_algebra')
    meet = meet_from_join(a)
    complemented = ((a.join == top) & (meet == bottom)).any(axis=1)
    return _check_masks('boolean_algebra', (
        ('x has a complement', ~complemented),
        ('xy = x ^ y', a.mult != meet),
    ))


def is_semifield(a: AlgebraTable) -> Report:
    """Every x != 0 has a two-sided inverse"""
    base = is_idempotent_semiring(a)
    if base.failed:
        return _renamed(base, 'semifield')
    invertible = ((a.mult == a.one) & (a.mult.T == a.one)).any(axis=1)
    return _check_masks('semifield', (('x has an inverse', ~invertible & (np.arange(a.size) != a.zero)),))


def with_derived_negations(a: AlgebraTable) -> AlgebraTable:
    """Attach ~x = x\\0 and -x = 0/x when a is residuated and lacks negation tables"""
    if a.has_negations or a.zero is None:
        return a
    negations = derived_negations(a)
    if negations is None:
        return a
    return a.with_(lneg=negations[0], rneg=negations[1])


PREDICATES: Dict[str, Callable[[AlgebraTable], Report]] = {
    'validate': validate,
    'is_idempotent_semiring': is_idempotent_semiring,
    'is_one_bounded': is_one_bounded,
    'is_commutative': is_commutative,
    'residuals': residuals,
    'is_involutive_semiring': is_involutive_semiring,
    'is_one_bounded_involutive': is_one_bounded_involutive,
    'is_involutive_rl': is_involutive_rl,
    'is_mv_semiring': is_mv_semiring,
    'is_mv_algebra': is_mv_algebra,
    'is_nilpotent_semiring': is_nilpotent_semiring,
    'is_mult_idempotent': is_mult_idempotent,
    'is_boolean_algebra': is_boolean_algebra,
    'is_semifield': is_semifield,
    'is_lattice_distributive': is_lattice_distributive,
}

PARAMETERISED: Dict[str, Callable[[AlgebraTable, int], Report]] = {
    'is_n_potent': is_n_potent,
    'is_n_vn_regular': is_n_vn_regular,
}


def resolve_predicate(name: str) -> Callable[[AlgebraTable], Report]:
    """Look up 'is_commutative' or a parameterised 'is_n_potent:2'"""
    base, _, argument = name.partition(':')
    if base in PARAMETERISED:
        try:
            n = int(argument)
        except ValueError:
            raise InputError(f"{base} needs a positive integer argument, e.g. {base}:2")
        if n < 1:
            raise InputError(f"{base} needs a positive integer argument, got {n}")
        func = PARAMETERISED[base]
        return lambda a: func(a, n)
    if base in PREDICATES and not argument:
        return PREDICATES[base]
    raise InputError(f"unknown predicate {name!r}", {'known': sorted(PREDICATES) + sorted(PARAMETERISED)})


def evaluate(a: AlgebraTable, name: str) -> Report:
    report = resolve_predicate(name)(a)
    logger.debug(f"{name} on {a.name}: {report.verdict}")
    return report
