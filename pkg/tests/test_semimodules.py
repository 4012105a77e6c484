import pytest

from source.apps.core.exceptions import InputError, PreconditionError
from source.apps.semimodules.models import HomKind, HomMap, SemimoduleTable, identity_hom
from source.apps.semimodules.services import (
    boolean_homs,
    cyclic,
    enumerate_homs,
    find_isomorphism,
    free,
    hom_id_iso_check,
    hom_module,
    id_semimodule,
    ideals,
    is_ideal,
    phi_check,
    product_semiring,
    regular,
    restrict,
    subsemimodule_generated,
    subsemimodules,
    validate_semimodule,
)


def test_constructions_are_semimodules(b2, a3, c4, m3):
    for m in (regular(c4), free(b2, 2), free(a3, 0), cyclic(c4, 2), id_semimodule(a3), m3):
        assert validate_semimodule(m).success, m.name


def test_free_sizes(b2, a3):
    assert free(b2, 2).size == 4
    assert free(a3, 2).size == 9
    assert free(a3, 0).is_trivial
    with pytest.raises(InputError):
        free(a3, -1)


def test_broken_action_is_reported(b2):
    bad = SemimoduleTable(name='bad', over=b2, size=2, join=[[0, 1], [1, 1]], zero=0,
                          action=[[0, 0], [0, 0]])
    report = validate_semimodule(bad)
    assert report.failed
    assert report.details['axiom'] == '1.x = x'


def test_cyclic_modules_of_the_chain(c4):
    assert cyclic(c4, 1).size == 2
    assert cyclic(c4, 2).size == 2
    assert cyclic(c4, 3) == regular(c4)
    assert subsemimodule_generated(regular(c4), [1]) == (0, 1)


def test_restrict_checks_closure(c4):
    reg = regular(c4)
    assert restrict(reg, [0, 2]).size == 2
    with pytest.raises(InputError):
        restrict(reg, [1, 2])
    with pytest.raises(InputError):
        restrict(reg, [0, 1, 3])


def test_subsemimodules_of_small_modules(b2, c4):
    assert subsemimodules(regular(b2)) == [(0,), (0, 1)]
    found = subsemimodules(regular(c4))
    assert found[0] == (0,)
    assert found[-1] == (0, 1, 2, 3)
    assert (0, 1, 2) in found
    assert (0, 1, 3) not in found


def test_ideals_of_a_chain_and_the_square(c4, b2xb2):
    assert [i.elements() for i in ideals(c4)] == [[0], [0, 1], [0, 1, 2], [0, 1, 2, 3]]
    assert len(ideals(b2xb2)) == 4
    assert is_ideal(c4, [0, 1])
    assert not is_ideal(c4, [1])
    assert not is_ideal(c4, [0, 2])


def test_boolean_homs_match_ideals(m3):
    homs = boolean_homs(m3)
    assert len(homs) == 5
    assert all(h.check().success for h in homs)


def test_semilattice_homs_into_b(m3, b2):
    homs = list(enumerate_homs(m3, b2, HomKind.SEMILATTICE))
    assert len(homs) == 5


def test_module_homs_of_the_boolean_semifield(b2):
    homs = [h.map for h in enumerate_homs(regular(b2), regular(b2))]
    assert sorted(homs) == [(0, 0), (0, 1)]


def test_module_homs_need_a_common_algebra(b2, c4):
    with pytest.raises(InputError):
        list(enumerate_homs(regular(b2), regular(c4)))


def test_hom_map_checks(c4):
    reg = regular(c4)
    assert identity_hom(reg).check().success
    report = HomMap(reg, reg, (0, 2, 1, 3)).check()
    assert report.failed
    assert report.details['law'] == 'join'
    with pytest.raises(InputError):
        HomMap(reg, reg, (0, 1))


def test_find_isomorphism(c4):
    assert find_isomorphism(regular(c4), cyclic(c4, 3)) is not None
    assert find_isomorphism(cyclic(c4, 1), cyclic(c4, 2)) is None


def test_hom_module_is_isomorphic_to_ideals(b2, a3, c4, b2xb2):
    for a in (b2, a3, c4, b2xb2):
        report = hom_id_iso_check(a)
        assert report.success, a.name
        assert report.certificate.is_bijective()
    module, homs = hom_module(a3)
    assert module.size == len(homs) == 3


def test_phi_tracks_involution(a3, c4, l3):
    report = phi_check(a3)
    assert report.success
    assert report.data == {'phi_isomorphism': False, 'involutive': False}
    for a in (c4, l3):
        assert phi_check(a).data == {'phi_isomorphism': True, 'involutive': True}


def test_phi_needs_zero_at_the_bottom(a3):
    with pytest.raises(PreconditionError):
        phi_check(a3.with_(zero=None))


def test_product_semiring_constants(b2):
    square = product_semiring([b2, b2])
    assert square.size == 4
    assert square.one == 3
    assert square.zero == 0
    assert square.display == ('(0,0)', '(0,1)', '(1,0)', '(1,1)')
