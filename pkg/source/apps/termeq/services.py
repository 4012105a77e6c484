"""Translations between involutive semirings and involutive residuated lattices"""
import logging
from typing import List, Optional, Tuple

import numpy as np

from source.apps.axioms.services import (
    is_commutative,
    is_involutive_rl,
    is_involutive_semiring,
    residuals,
)
from source.apps.core.exceptions import PreconditionError, UnsupportedError
from source.apps.core.models import AlgebraTable
from source.apps.core.services import Report
from source.apps.core.tables import (
    first_violation,
    greatest_element,
    least_element,
    leq_matrix,
    meet_from_join,
)

logger = logging.getLogger(__name__)


def _require(report: Report, operation: str) -> Report:
    if report.failed:
        raise PreconditionError(f"{operation}: {report.name} fails ({report.error})", report)
    return report


def irl_to_invsr(a: AlgebraTable) -> AlgebraTable:
    """Read off ~x = x\\0 and -x = 0/x from an involutive residuated lattice"""
    _require(is_involutive_rl(a), 'irl_to_invsr')
    lres, rres = residuals(a).data
    return a.with_(lneg=lres[:, a.zero], rneg=rres[a.zero, :], meet=None, lres=None, rres=None)


def invsr_to_irl(a: AlgebraTable) -> AlgebraTable:
    """Attach x ^ y = ~(-x v -y), x\\z = ~(-z . x), z/y = -(y . ~z) and 0 = -1"""
    _require(is_involutive_semiring(a), 'invsr_to_irl')
    lneg, rneg = a.lneg, a.rneg
    meet = lneg[a.join[rneg[:, None], rneg[None, :]]]
    lres = lneg[a.mult[rneg[None, :], np.arange(a.size)[:, None]]]
    rres = rneg[a.mult[np.arange(a.size)[None, :], lneg[:, None]]]
    return a.with_(zero=int(rneg[a.one]), meet=meet, lres=lres, rres=rres)


def _table_mismatch(label: str, expected: Optional[np.ndarray], actual: Optional[np.ndarray]) -> Optional[Tuple]:
    if expected is None or actual is None:
        return None if expected is None and actual is None else (label,)
    witness = first_violation(expected != actual)
    return None if witness is None else (label,) + witness


def roundtrip_check(a: AlgebraTable) -> Report:
    """Both compositions of the translations are literal identities on the tables"""
    name = 'roundtrip'
    if a.has_negations:
        irl = invsr_to_irl(a)
        back = irl_to_invsr(irl.irl_reduct())
        intrinsic = residuals(irl.irl_reduct())
        checks = [
            _table_mismatch('lneg', a.lneg, back.lneg),
            _table_mismatch('rneg', a.rneg, back.rneg),
        ]
        if intrinsic.success:
            checks.append(_table_mismatch('lres', intrinsic.data[0], irl.lres))
            checks.append(_table_mismatch('rres', intrinsic.data[1], irl.rres))
        else:
            checks.append(('residuals',) + (intrinsic.witness or ()))
        if a.zero is not None and a.zero != irl.zero:
            checks.append(('zero', a.zero, irl.zero))
        again = invsr_to_irl(back.invsr_reduct())
        checks.extend([
            _table_mismatch('meet', irl.meet, again.meet),
            _table_mismatch('lres', irl.lres, again.lres),
            _table_mismatch('rres', irl.rres, again.rres),
        ])
    elif a.zero is not None:
        inv = irl_to_invsr(a)
        irl = invsr_to_irl(inv.invsr_reduct())
        lres, rres = residuals(a).data
        again = irl_to_invsr(irl.irl_reduct())
        checks = [
            _table_mismatch('lres', lres, irl.lres),
            _table_mismatch('rres', rres, irl.rres),
            ('zero', a.zero, irl.zero) if a.zero != irl.zero else None,
            _table_mismatch('lneg', inv.lneg, again.lneg),
            _table_mismatch('rneg', inv.rneg, again.rneg),
        ]
    else:
        raise PreconditionError(f"roundtrip_check: {a.name} has neither negations nor a zero")
    for witness in checks:
        if witness is not None:
            return Report.failed_with(name, f"translation round trip differs at {witness}", witness)
    return Report.passed(name)


def _interval_closure(a: AlgebraTable, members: List[int], zero: int) -> Optional[Tuple]:
    """First way the subset fails to be a subalgebra, or None"""
    inside = np.zeros(a.size, dtype=bool)
    inside[members] = True
    if not inside[zero]:
        return ('zero', zero)
    if not inside[a.one]:
        return ('one', a.one)
    idx = np.array(members, dtype=np.int64)
    for label, table in (('join', a.join), ('mult', a.mult)):
        sub = table[np.ix_(idx, idx)]
        witness = first_violation(~inside[sub])
        if witness is not None:
            return (label, int(idx[witness[0]]), int(idx[witness[1]]))
    for label, table in (('lneg', a.lneg), ('rneg', a.rneg)):
        witness = first_violation(~inside[table[idx]])
        if witness is not None:
            return (label, int(idx[witness[0]]))
    return None


def unit_interval(a: AlgebraTable) -> Report:
    """[0,1] as a subalgebra when 0.0 = 0; otherwise a witness plus a direct closure check"""
    _require(is_involutive_semiring(a), 'unit_interval')
    zero = int(a.rneg[a.one])
    leq = leq_matrix(a.join)
    members = [int(x) for x in np.flatnonzero(leq[zero, :] & leq[:, a.one])]
    closure_failure = _interval_closure(a, members, zero)
    closed = closure_failure is None
    zero_idempotent = int(a.mult[zero, zero]) == zero
    details = {
        'members': members,
        'closed': closed,
        'zero_idempotent': zero_idempotent,
        'zero_below_one': bool(leq[zero, a.one]),
        'disagreement': closed != zero_idempotent,
    }
    if zero_idempotent and closed:
        return Report.passed('unit_interval', members, details=details)
    if zero_idempotent:
        return Report.failed_with('unit_interval', f"[0,1] is not closed: {closure_failure}",
                                  closure_failure, details=details)
    if not members:
        logger.debug(f"{a.name}: 0 is not below 1, the interval is empty")
    return Report.failed_with('unit_interval',
                              f"0.0 = {int(a.mult[zero, zero])} differs from 0 = {zero}",
                              (zero,), details=details)


def interval_agreement(a: AlgebraTable) -> Report:
    """The interval is a subalgebra exactly when 0.0 = 0"""
    details = unit_interval(a).details
    if details['disagreement']:
        return Report.failed_with('interval_agreement',
                                  f"closed={details['closed']} but 0.0=0 is {details['zero_idempotent']}",
                                  tuple(details['members']), details=details)
    return Report.passed('interval_agreement', details['closed'], details=details)


def identity_battery(a: AlgebraTable) -> Report:
    """Every identity used to prove the two presentations term-equivalent"""
    irl = invsr_to_irl(a)
    n = a.size
    ar = np.arange(n)
    lneg, rneg, zero = a.lneg, a.rneg, irl.zero
    leq = leq_matrix(a.join)
    meet, lres, rres = irl.meet, irl.lres, irl.rres
    product_below = leq[a.mult[:, :, None], ar[None, None, :]]
    zero_below = leq[:, zero]
    bottom = least_element(a)
    top = greatest_element(a)

    checks = [
        ('~-x = x', lneg[rneg] != ar),
        ('-~x = x', rneg[lneg] != ar),
        ('-x = -~-x', rneg != rneg[lneg[rneg]]),
        ('x <= y implies -y <= -x', leq & ~leq[rneg[None, :], rneg[:, None]]),
        ('x <= y implies ~y <= ~x', leq & ~leq[lneg[None, :], lneg[:, None]]),
        ('x ^ (x v y) = x', meet[ar[:, None], a.join] != ar[:, None]),
        ('x v (x ^ y) = x', a.join[ar[:, None], meet] != ar[:, None]),
        ('xy <= z iff x <= z/y', product_below != leq[ar[:, None, None], rres.T[None, :, :]]),
        ('xy <= z iff y <= x\\z', product_below != leq[ar[None, :, None], lres[:, None, :]]),
        ('x <= 0/y iff xy <= 0', leq[ar[:, None], rres[zero][None, :]] != zero_below[a.mult]),
        ('xy <= 0 iff y <= x\\0', zero_below[a.mult] != leq[ar[None, :], lres[:, zero][:, None]]),
        ('x~x <= 0', ~zero_below[a.mult[ar, lneg]]),
        ('-x x <= 0', ~zero_below[a.mult[rneg, ar]]),
        ('meet is the greatest lower bound', meet != meet_from_join(a)),
    ]
    if bottom == zero:
        checks.append(('x~x = 0 when 0 is the bottom', a.mult[ar, lneg] != zero))
        checks.append(('-x x = 0 when 0 is the bottom', a.mult[rneg, ar] != zero))
    if is_commutative(a).success:
        checks.append(('~x = -x when commutative', lneg != rneg))
    checks.append(('0 is the bottom iff 1 is the top', np.array([(bottom == zero) != (top == a.one)])))

    for label, mask in checks:
        witness = first_violation(mask)
        if witness is not None:
            return Report.failed_with('identity_battery', f"{label} fails at {witness}",
                                      (label,) + witness, details={'identity': label})
    return Report.passed('identity_battery', len(checks))


def galois_check(a: AlgebraTable) -> Report:
    """x <= 0/y iff xy <= 0 iff y <= x\\0, and -~-x = -x, ~-~x = ~x"""
    if a.zero is None:
        raise UnsupportedError("galois_check needs a declared zero", {'algebra': a.name})
    report = residuals(a)
    if report.failed:
        raise PreconditionError(f"galois_check: {a.name} is not residuated", report)
    lres, rres = report.data
    zero = a.zero
    lneg = lres[:, zero]
    rneg = rres[zero, :]
    leq = leq_matrix(a.join)
    ar = np.arange(a.size)
    zero_below = leq[a.mult, zero]
    checks = (
        ('x <= -y iff xy <= 0', leq[ar[:, None], rneg[None, :]] != zero_below),
        ('xy <= 0 iff y <= ~x', zero_below != leq[ar[None, :], lneg[:, None]]),
        ('-~-x = -x', rneg[lneg[rneg]] != rneg),
        ('~-~x = ~x', lneg[rneg[lneg]] != lneg),
    )
    for label, mask in checks:
        witness = first_violation(mask)
        if witness is not None:
            return Report.failed_with('galois', f"{label} fails at {witness}", (label,) + witness)
    return Report.passed('galois')
