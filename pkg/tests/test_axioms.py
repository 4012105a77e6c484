import numpy as np
import pytest

from source.apps.axioms.services import (
    derived_negations,
    evaluate,
    is_boolean_algebra,
    is_commutative,
    is_idempotent_semiring,
    is_involutive_rl,
    is_involutive_semiring,
    is_mult_idempotent,
    is_mv_algebra,
    is_mv_semiring,
    is_n_potent,
    is_n_vn_regular,
    is_nilpotent_semiring,
    is_one_bounded,
    is_one_bounded_involutive,
    is_semifield,
    powers,
    resolve_predicate,
    residuals,
    with_derived_negations,
)
from source.apps.core.exceptions import InputError, UnsupportedError


def test_boolean_semifield_is_in_every_bounded_class(b2):
    for predicate in (is_idempotent_semiring, is_one_bounded, is_one_bounded_involutive,
                      is_involutive_semiring, is_boolean_algebra, is_semifield, is_mv_semiring):
        assert predicate(b2).success, predicate.__name__


def test_four_element_chain_is_one_bounded_involutive(c4):
    assert is_one_bounded_involutive(c4).success
    assert is_involutive_semiring(c4).success
    assert is_commutative(c4).success
    assert not is_mv_semiring(c4).success
    assert not is_boolean_algebra(c4).success


def test_involution_fails_when_negation_is_not_an_inverse(c4):
    broken = c4.with_(lneg=np.array([3, 1, 2, 0]), rneg=np.array([3, 1, 2, 0]))
    report = is_one_bounded_involutive(broken)
    assert report.failed
    assert report.witness is not None


def test_negation_predicates_need_negations(a3):
    with pytest.raises(UnsupportedError):
        is_one_bounded_involutive(a3)
    with pytest.raises(UnsupportedError):
        is_involutive_semiring(a3)


def test_zero_predicates_need_a_zero(a3):
    with pytest.raises(UnsupportedError):
        is_idempotent_semiring(a3.with_(zero=None))


def test_residuals_of_the_heyting_chain(a3):
    report = residuals(a3)
    assert report.success
    lres, rres = report.data
    assert lres.tolist() == [[2, 2, 2], [0, 2, 2], [0, 1, 2]]
    assert np.array_equal(lres, rres.T)


def test_derived_negations_of_the_heyting_chain(a3):
    lneg, rneg = derived_negations(a3)
    assert lneg.tolist() == [2, 0, 0]
    assert rneg.tolist() == [2, 0, 0]
    assert with_derived_negations(a3).lneg.tolist() == [2, 0, 0]


def test_derived_negations_match_declared_ones(l3):
    bare = l3.with_(lneg=None, rneg=None)
    restored = with_derived_negations(bare)
    assert restored == l3


def test_heyting_chain_is_not_involutive(a3):
    report = is_involutive_rl(a3)
    assert report.failed
    assert report.witness == (1,)


def test_lukasiewicz_chain(l3):
    assert is_involutive_rl(l3).success
    assert is_mv_semiring(l3).success
    assert is_mv_algebra(l3).success
    assert is_nilpotent_semiring(l3).success
    assert not is_mult_idempotent(l3).success


def test_powers_and_potency(c4):
    assert powers(c4, 1).tolist() == [0, 1, 2, 3]
    assert powers(c4, 2).tolist() == [0, 0, 2, 3]
    report = is_n_potent(c4, 1)
    assert report.failed
    assert report.witness == (1,)
    assert is_n_potent(c4, 2).success
    with pytest.raises(InputError):
        powers(c4, 0)


def test_regularity_follows_potency(a3, c4):
    assert is_n_vn_regular(a3, 1).success
    assert not is_n_vn_regular(c4, 1).success
    assert is_n_vn_regular(c4, 2).success


def test_heyting_chain_is_not_a_semifield(a3):
    report = is_semifield(a3)
    assert report.failed
    assert report.witness == (1,)


def test_square_is_boolean(b2xb2):
    assert is_boolean_algebra(b2xb2).success
    assert is_mult_idempotent(b2xb2).success
    assert not is_semifield(b2xb2).success


def test_resolve_predicate_names():
    """Plain and parameterised names resolve; malformed ones are input errors"""
    assert resolve_predicate('is_commutative') is is_commutative
    for bad in ('is_n_potent', 'is_n_potent:0', 'is_n_potent:x', 'is_commutative:2', 'nope'):
        with pytest.raises(InputError):
            resolve_predicate(bad)


def test_evaluate_parameterised(c4):
    assert evaluate(c4, 'is_n_potent:2').success
    assert evaluate(c4, 'is_n_potent:1').failed
