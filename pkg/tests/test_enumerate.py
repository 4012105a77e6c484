from pathlib import Path

import msgpack
import numpy as np
import pytest
from pydantic import ValidationError

from source.apps.axioms.services import is_one_bounded_involutive
from source.apps.core.cache_manager import CacheManager
from source.apps.core.exceptions import InputError, SearchInterrupted
from source.apps.core.tables import canonical_key, is_lattice_distributive
from source.apps.enumerate.lattices import enumerate_lattices, join_from_order
from source.apps.enumerate.models import AlgebraClass, SearchSpec
from source.apps.enumerate.services import (
    BatteryService,
    EnumerationService,
    MultiplicationSearch,
    anti_automorphisms,
    unit_candidates,
)
from source.layers.utils.file_management import CheckpointStore
from source.settings.settings_manager import SettingsManager

CHAIN3 = np.array([[0, 1, 2], [1, 1, 2], [2, 2, 2]])


@pytest.fixture
def enumeration_service(settings):
    return EnumerationService(settings, cache_manager=CacheManager(settings))


@pytest.fixture
def battery_service(settings, enumeration_service):
    return BatteryService(settings, enumeration_service)


def spec_for(algebra_class, max_size, **kwargs):
    return SearchSpec(max_size=max_size, algebra_class=algebra_class, **kwargs)


def test_lattice_counts():
    """Small lattices up to isomorphism"""
    assert [len(enumerate_lattices(n)) for n in (1, 2, 3, 4, 5)] == [1, 1, 1, 2, 5]
    assert len(enumerate_lattices(5, self_dual_only=True)) == 3
    nondistributive = enumerate_lattices(5, nondistributive_only=True)
    assert len(nondistributive) == 2
    assert all(is_lattice_distributive(join).failed for join in nondistributive)


@pytest.mark.slow
def test_lattice_counts_six_and_seven():
    assert len(enumerate_lattices(6)) == 15
    assert len(enumerate_lattices(7)) == 53


def test_join_from_order_rejects_non_lattices():
    # two incomparable elements with two incomparable upper bounds
    leq = np.eye(4, dtype=bool)
    leq[0, 2] = leq[0, 3] = leq[1, 2] = leq[1, 3] = True
    assert join_from_order(leq) is None


def test_anti_automorphisms(b2xb2):
    assert [a.tolist() for a in anti_automorphisms(CHAIN3)] == [[2, 1, 0]]
    assert len(anti_automorphisms(b2xb2.join)) == 2


def test_unit_candidates():
    assert unit_candidates(CHAIN3, AlgebraClass.ONE_BOUNDED_IDEMPOTENT) == [2]
    assert unit_candidates(CHAIN3, AlgebraClass.IDEMPOTENT_SEMIRING) == [1, 2]


def test_multiplication_search_on_the_three_chain():
    tables = list(MultiplicationSearch(CHAIN3, unit=2, one_bounded=True).tables())
    assert sorted(t[1, 1] for t in tables) == [0, 1]
    involutive = list(MultiplicationSearch(CHAIN3, unit=2, one_bounded=True,
                                           rneg=np.array([2, 1, 0])).tables())
    assert [t.tolist() for t in involutive] == [[[0, 0, 0], [0, 0, 1], [0, 1, 2]]]


def test_one_bounded_involutive_up_to_three(enumeration_service, b2, l3):
    found = list(enumeration_service.enumerate_algebras(spec_for(AlgebraClass.ONE_BOUNDED_INVOLUTIVE, 3)))
    assert [a.size for a in found] == [2, 3]
    assert all(is_one_bounded_involutive(a).success for a in found)
    assert {canonical_key(a) for a in found} == {canonical_key(b2), canonical_key(l3)}


def test_one_bounded_idempotent_up_to_three(enumeration_service):
    found = list(enumeration_service.enumerate_algebras(spec_for(AlgebraClass.ONE_BOUNDED_IDEMPOTENT, 3)))
    assert len(found) == 3
    assert len({canonical_key(a) for a in found}) == 3


def test_filters_and_limit(enumeration_service):
    idempotent = spec_for(AlgebraClass.ONE_BOUNDED_IDEMPOTENT, 3, filters=['is_mult_idempotent'])
    assert len(list(enumeration_service.enumerate_algebras(idempotent))) == 2
    not_idempotent = spec_for(AlgebraClass.ONE_BOUNDED_IDEMPOTENT, 3, filters=['is_mult_idempotent=false'])
    assert len(list(enumeration_service.enumerate_algebras(not_idempotent))) == 1
    limited = spec_for(AlgebraClass.ONE_BOUNDED_IDEMPOTENT, 3, limit=1)
    assert len(list(enumeration_service.enumerate_algebras(limited))) == 1


def test_search_spec_validation():
    with pytest.raises(ValidationError):
        SearchSpec(max_size=0, algebra_class='1-bounded-involutive')
    with pytest.raises(ValidationError):
        SearchSpec(max_size=3, algebra_class='1-bounded-involutive', filters=['Not A Filter'])
    spec = SearchSpec.model_validate({'max_size': 3, 'class': 'involutive-semiring',
                                      'filters': 'is_n_potent:2=true'})
    assert spec.parsed_filters() == [('is_n_potent:2', True)]


def test_out_of_range_searches_are_refused(enumeration_service):
    with pytest.raises(InputError):
        list(enumeration_service.enumerate_algebras(spec_for(AlgebraClass.ONE_BOUNDED_INVOLUTIVE, 8)))
    with pytest.raises(InputError):
        list(enumeration_service.enumerate_algebras(
            spec_for(AlgebraClass.ONE_BOUNDED_INVOLUTIVE, 3, filters=['is_unknown'])))


def test_checkpoint_resume(enumeration_service, tmp_path):
    """An interrupted search resumes from its checkpoint and finds the same algebras"""
    spec = spec_for(AlgebraClass.ONE_BOUNDED_IDEMPOTENT, 3)
    path = tmp_path / 'search.msgpack'
    with pytest.raises(SearchInterrupted) as excinfo:
        list(enumeration_service.enumerate_algebras(spec, checkpoint=str(path), time_budget=1e-9))
    assert excinfo.value.checkpoint == str(path)
    assert path.exists()
    resumed = list(enumeration_service.enumerate_algebras(spec, checkpoint=str(path)))
    fresh = list(enumeration_service.enumerate_algebras(spec))
    assert [canonical_key(a) for a in resumed] == [canonical_key(a) for a in fresh]


def test_checkpoint_store_ignores_other_versions(tmp_path):
    path = tmp_path / 'state.msgpack'
    store = CheckpointStore(str(path), version=1)
    assert store.save({'spec': 'k', 'done': ['2:0:1:0'], 'found': []})
    assert store.load('k')['done'] == ['2:0:1:0']
    assert store.load('other')['done'] == []
    assert CheckpointStore(str(path), version=2).load('k')['done'] == []
    with open(path, 'rb') as f:
        assert msgpack.unpackb(f.read(), raw=False)['version'] == 1
    store.clear()
    assert not path.exists()


def test_corrupt_checkpoint_starts_fresh(tmp_path):
    path = tmp_path / 'state.msgpack'
    path.write_bytes(b'\xc1not msgpack')
    store = CheckpointStore(str(path))
    assert store.load('k') == {'spec': 'k', 'done': [], 'found': []}
    assert store.has_errors()


def test_no_small_nondistributive_involutive_algebra(enumeration_service, tmp_path):
    report = enumeration_service.smallest_nondistributive(5, checkpoint=str(tmp_path / 'nd.msgpack'))
    assert report.verdict == 'value'
    assert report.data == {'size': None, 'count': 0, 'max_size': 5}


def test_nondistributive_search_defaults_to_the_checkpoint_dir(tmp_path):
    settings = SettingsManager()
    settings.override('search', 'checkpoint_dir', str(tmp_path))
    service = EnumerationService(settings, cache_manager=CacheManager(settings))
    report = service.smallest_nondistributive(3)
    assert Path(report.details['checkpoint']).parent == tmp_path


def test_battery_over_small_involutive_algebras(battery_service):
    spec = spec_for(AlgebraClass.ONE_BOUNDED_INVOLUTIVE, 3)
    checks = ['roundtrip_check', 'translation_consistency', 'class_agreement', 'mv_consistency',
              'cyclic_trichotomy_check', 'vn_regular_iff_npotent']
    report = battery_service.theorem_battery(spec, checks)
    assert report.success, report.error
    assert report.details['instances'] == 2
    assert report.data['roundtrip_check'] == {'pass': 2, 'fail': 0, 'skip': 0}


@pytest.mark.slow
@pytest.mark.parametrize('algebra_class, max_size, checks', [
    (AlgebraClass.ONE_BOUNDED_INVOLUTIVE, 5,
     ['roundtrip_check', 'identity_battery', 'translation_consistency', 'class_agreement',
      'mult_idempotent_iff_boolean', 'mv_consistency']),
    (AlgebraClass.INVOLUTIVE_SEMIRING, 5, ['interval_agreement', 'roundtrip_check']),
    (AlgebraClass.IDEMPOTENT_SEMIRING, 4, ['hom_id_iso_check']),
    (AlgebraClass.POINTED_RESIDUATED, 5, ['phi_check', 'galois_check']),
    (AlgebraClass.ONE_BOUNDED_INVOLUTIVE, 4,
     ['injective_iff_projective_check', 'cyclic_trichotomy_check', 'strong_iff_faithful_check',
      'principal_ideal_equivalence_check', 'npotent_selfinjective_check']),
    (AlgebraClass.ONE_BOUNDED_IDEMPOTENT, 4, ['vn_regular_iff_npotent']),
])
def test_theorem_batteries_over_enumerated_classes(battery_service, algebra_class, max_size, checks):
    """Every named check holds on every enumerated algebra of the class"""
    report = battery_service.theorem_battery(spec_for(algebra_class, max_size), checks)
    assert report.success, report.error
    assert report.details['instances'] > 2
    assert {name: counts['fail'] for name, counts in report.data.items()} == dict.fromkeys(checks, 0)
    assert all(counts['pass'] + counts['skip'] == report.details['instances'] for counts in report.data.values())


def test_battery_skips_checks_outside_their_hypotheses(battery_service, a3):
    spec = spec_for(AlgebraClass.ONE_BOUNDED_IDEMPOTENT, 3)
    report = battery_service.theorem_battery(spec, ['mult_idempotent_iff_boolean'], algebras=[a3])
    assert report.success
    assert report.data['mult_idempotent_iff_boolean']['skip'] == 1


def test_battery_rejects_unknown_checks(battery_service):
    with pytest.raises(InputError):
        battery_service.theorem_battery(spec_for(AlgebraClass.ONE_BOUNDED_INVOLUTIVE, 2), ['nope'])
