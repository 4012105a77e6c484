import itertools

import pytest

from source.apps.axioms.services import with_derived_negations
from source.apps.core.exceptions import InputError, PreconditionError
from source.apps.decide.services import (
    ideal_lattice_check,
    is_faithful,
    is_join_distributive,
    is_mid_complete,
    is_strong,
)
from source.apps.semimodules.services import cyclic, free, regular


def test_heyting_chain_is_projective_not_injective(decision_service, a3):
    """The regular module of a non-involutive chain is projective only"""
    projective = decision_service.is_projective(a3, regular(a3))
    assert projective.success
    assert projective.certificate.verify().success
    injective = decision_service.is_injective(a3, regular(a3))
    assert injective.failed
    assert injective.witness is not None
    assert not decision_service.is_self_injective(a3).success


def test_involutive_algebras_are_self_injective(decision_service, b2, c4, l3):
    for a in (b2, c4, l3):
        report = decision_service.is_self_injective(a)
        assert report.success, a.name
        assert report.certificate is None or report.certificate.verify().success


def test_injective_certificate_is_a_retraction(decision_service, b2):
    report = decision_service.is_injective(b2, regular(b2))
    assert report.success
    assert report.certificate is not None
    assert report.certificate.verify().success
    assert report.certificate.to_dict()['inner'] == 'regular(B2)'


def test_cyclic_modules_of_the_chain(decision_service, c4):
    assert decision_service.is_injective(c4, cyclic(c4, 2)).success
    assert decision_service.is_projective(c4, cyclic(c4, 2)).success
    assert decision_service.is_injective(c4, cyclic(c4, 0)).success
    assert not decision_service.is_injective(c4, cyclic(c4, 1)).success
    assert not decision_service.is_projective(c4, cyclic(c4, 1)).success


def test_injectivity_through_regular_powers_agrees(decision_service, c4):
    for x in range(c4.size):
        m = cyclic(c4, x)
        direct = decision_service.is_injective(c4, m, certify=False).success
        assert decision_service.injective_via_regular_power(c4, m).success == direct


def test_free_modules_are_projective(decision_service, a3):
    assert decision_service.is_projective(a3, free(a3, 2)).success


def test_module_must_be_over_the_algebra(decision_service, a3, c4):
    with pytest.raises(InputError):
        decision_service.is_injective(a3, regular(c4))


def test_faithful_and_strong(c4, l3):
    report = is_faithful(c4, cyclic(c4, 1))
    assert report.failed
    assert report.witness == (1,)
    assert is_faithful(c4, regular(c4)).success
    assert is_strong(l3, regular(l3)).success


def test_diamond_lattice_checks(m3, c4):
    assert not is_mid_complete(m3).success
    assert not is_join_distributive(m3).success
    assert is_mid_complete(c4).success
    assert is_join_distributive(c4).success


def test_ideal_lattice(a3, b2xb2, m3):
    for structure in (a3, b2xb2, m3):
        report = ideal_lattice_check(structure)
        assert report.success
        assert report.details['exhaustive']
    assert not ideal_lattice_check(m3).details['mid_checked']


def test_cyclic_trichotomy_on_the_chain(decision_service, c4):
    report = decision_service.cyclic_trichotomy_check(c4)
    assert report.success
    assert report.details['idempotents'] == [0, 2, 3]


def test_theorem_checks_need_their_hypotheses(decision_service, a3):
    with pytest.raises(PreconditionError):
        decision_service.cyclic_trichotomy_check(with_derived_negations(a3))
    with pytest.raises(PreconditionError):
        decision_service.strong_iff_faithful_check(with_derived_negations(a3))


def test_forced_trichotomy_disagrees_outside_the_class(decision_service, a3):
    report = decision_service.cyclic_trichotomy_check(a3, force=True)
    assert report.failed


def test_principal_ideals_and_potency(decision_service, b2, b2xb2, c4):
    assert decision_service.principal_ideal_equivalence_check(b2).success
    assert decision_service.principal_ideal_equivalence_check(b2xb2).success
    assert decision_service.npotent_selfinjective_check(c4, 2).success
    assert decision_service.npotent_selfinjective_check(c4, 1).success


def test_products_of_self_injective_factors(decision_service, b2, c4):
    report = decision_service.product_selfinjective_check([b2, c4])
    assert report.success
    assert report.details['factors'] == {'B2': True, 'C4': True}


@pytest.mark.slow
def test_every_two_factor_product(decision_service, b2, a3, c4, l3):
    """A product is self-injective exactly when its factors are"""
    for pair in itertools.combinations_with_replacement([b2, a3, c4, l3], 2):
        report = decision_service.product_selfinjective_check(list(pair))
        assert report.success, [f.name for f in pair]


def test_injective_modules_over_a_chain_are_mid_complete(decision_service, c4):
    report = decision_service.injective_mid_check(c4, regular(c4))
    assert report.success
    assert report.details['injective']


def test_injective_iff_projective_over_b(decision_service, b2):
    report = decision_service.injective_iff_projective_check(b2)
    assert report.success
    assert report.data >= 3


@pytest.mark.slow
def test_injective_iff_projective_over_the_chain(decision_service, c4):
    assert decision_service.injective_iff_projective_check(c4).success


def test_strong_iff_faithful(decision_service, l3):
    assert decision_service.strong_iff_faithful_check(l3).success
