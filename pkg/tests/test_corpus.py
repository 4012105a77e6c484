import pytest

from source.apps.cli.corpus import (
    CorpusEntry,
    DERIVED,
    builtin_corpus,
    evaluate_expectations,
    lookup,
    resolve_module,
    run_check,
)
from source.apps.core.exceptions import InputError


@pytest.mark.parametrize('entry', builtin_corpus(), ids=lambda e: e.name)
def test_builtin_expectations_hold(entry, decision_service):
    report = evaluate_expectations(entry, decision_service)
    assert report.success, report.error
    assert set(report.data) == set(entry.expected)


def test_lookup():
    assert lookup('corpus:C4').structure.size == 4
    assert lookup('L3').name == 'L3'
    with pytest.raises(InputError):
        lookup('corpus:Q8')


def test_mismatched_expectation_is_reported(a3, decision_service):
    entry = CorpusEntry('A3', a3, {'is_semifield': (True, DERIVED), 'is_commutative': (True, DERIVED)})
    report = evaluate_expectations(entry, decision_service)
    assert report.failed
    assert report.details['mismatches'] == ['is_semifield']
    assert report.data['is_commutative']['actual'] is True


def test_module_selectors(decision_service, c4, m3):
    assert resolve_module(decision_service, c4, 'regular').size == 4
    assert resolve_module(decision_service, c4, 'free:2').size == 16
    assert resolve_module(decision_service, c4, 'cyclic:b').size == 2
    assert resolve_module(decision_service, c4, 'id').name == 'Id(C4)'
    assert resolve_module(decision_service, m3.over, 'M3', {'M3': m3}) is m3
    for bad in ('free:two', 'cyclic:z', 'nothing'):
        with pytest.raises(InputError):
            resolve_module(decision_service, c4, bad)


def test_run_check_dispatch(decision_service, c4, m3):
    assert run_check(c4, 'is_n_potent:2', decision_service).success
    assert run_check(c4, 'injective:cyclic:b', decision_service).success
    assert run_check(m3, 'validate_semimodule', decision_service).success
    with pytest.raises(InputError):
        run_check(m3, 'is_commutative', decision_service)
