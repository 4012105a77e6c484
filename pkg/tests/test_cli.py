import json

import jsonschema
import pytest
from click.testing import CliRunner

from source.apps.cli.commands import REPORT_SCHEMA, cli, run_command
from source.apps.cli.formats import emit, emit_document, parse
from source.apps.core.models import AlgebraTable


@pytest.fixture
def runner():
    return CliRunner(mix_stderr=False)


def invoke_json(runner, *args):
    result = runner.invoke(cli, ['--json', *args])
    payload = json.loads(result.stdout)
    jsonschema.validate(payload, REPORT_SCHEMA)
    return result.exit_code, payload


def test_projective_regular_module(runner):
    code, payload = invoke_json(runner, 'projective', 'corpus:A3')
    assert code == 0
    assert payload['command'] == 'projective'
    assert payload['verdict'] == 'pass'
    assert payload['inputs']['module'] == 'regular(A3)'
    assert 'certificate' in payload
    assert payload['timing']['seconds'] >= 0


def test_failed_verdict_still_exits_zero(runner):
    code, payload = invoke_json(runner, 'injective', 'corpus:A3')
    assert code == 0
    assert payload['verdict'] == 'fail'
    assert payload['witness']


def test_module_selector(runner):
    code, payload = invoke_json(runner, 'injective', 'corpus:C4', '--module', 'cyclic:a')
    assert code == 0
    assert payload['verdict'] == 'fail'
    code, payload = invoke_json(runner, 'injective', 'corpus:C4', '--module', 'cyclic:b')
    assert payload['verdict'] == 'pass'


def test_missing_file_is_an_input_error(runner):
    result = runner.invoke(cli, ['check', 'nosuch.alg'])
    assert result.exit_code == 2
    assert 'no such file' in result.stderr


def test_malformed_file_reports_its_line(runner, tmp_path):
    path = tmp_path / 'broken.alg'
    path.write_text('algebra X\nsize 2\njoin\n0 7\n')
    code, payload = invoke_json(runner, 'check', str(path))
    assert code == 2
    assert payload['verdict'] == 'error'
    assert payload['error'].startswith('line 4')


def test_check_survey(runner):
    code, payload = invoke_json(runner, 'check', 'corpus:C4')
    assert code == 0
    assert payload['verdict'] == 'value'
    assert payload['data']['is_one_bounded_involutive'] == 'pass'
    assert payload['data']['is_n_potent:1'] == 'fail'
    assert payload['data']['is_n_potent:2'] == 'pass'
    assert payload['details']['negations'] == 'declared'


def test_check_class(runner):
    result = runner.invoke(cli, ['check', 'corpus:C4', '--class', '1-bounded-involutive'])
    assert result.exit_code == 0
    assert 'C4 is a 1-bounded-involutive' in result.stdout
    code, payload = invoke_json(runner, 'check', 'corpus:A3', '--class', '1-bounded-involutive')
    assert code == 0
    assert payload['verdict'] == 'fail'


def test_termeq(runner):
    code, payload = invoke_json(runner, 'termeq', 'corpus:L3')
    assert code == 0
    assert payload['data'] == {'roundtrip': 'pass', 'identity_battery': 'pass'}
    assert payload['certificate']['lres'] is not None
    code, payload = invoke_json(runner, 'termeq', 'corpus:A3')
    assert code == 2
    assert payload['verdict'] == 'error'


def test_interval(runner):
    code, payload = invoke_json(runner, 'interval', 'corpus:C4')
    assert code == 0
    assert payload['data']['members'] == [0, 1, 2, 3]
    assert payload['details']['subalgebra'] == 'pass'


def test_ideals(runner):
    code, payload = invoke_json(runner, 'ideals', 'corpus:B2xB2')
    assert code == 0
    assert payload['data']['count'] == 4
    assert payload['data']['join_distributive'] is True
    assert payload['data']['id_semimodule'] == 'pass'


def test_homs(runner):
    code, payload = invoke_json(runner, 'homs', 'corpus:B2', 'corpus:B2')
    assert code == 0
    assert payload['data']['count'] == 2
    code, payload = invoke_json(runner, 'homs', 'corpus:M3', 'corpus:B2', '--kind', 'semilattice')
    assert payload['data']['count'] == 5


def test_semimodule_file(runner, tmp_path, m3):
    """A file holding an algebra and a semimodule over it"""
    path = tmp_path / 'diamond.alg'
    path.write_text(emit_document([m3]))
    code, payload = invoke_json(runner, 'injective', str(path))
    assert code == 0
    assert payload['inputs']['module'] == 'M3'
    assert payload['verdict'] == 'fail'
    code, payload = invoke_json(runner, 'ideals', f'{path}#M3')
    assert payload['data']['count'] == 5
    assert payload['data']['mid_complete'] is False


def test_enumerate_writes_a_parsable_file(runner, tmp_path):
    output = tmp_path / 'found.alg'
    code, payload = invoke_json(runner, 'enumerate', '--class', '1-bounded-involutive', '--max-size', '3',
                                '--output', str(output))
    assert code == 0
    assert payload['data']['count'] == 2
    assert payload['data']['by_size'] == {'2': 1, '3': 1}
    assert [a.size for a in parse(output.read_text())] == [2, 3]


def test_enumerate_rejects_bad_filters(runner):
    code, payload = invoke_json(runner, 'enumerate', '--class', '1-bounded-involutive', '--max-size', '3',
                                '--filter', 'Not A Filter')
    assert code == 2


def test_battery(runner):
    code, payload = invoke_json(runner, 'battery', '--class', '1-bounded-involutive', '--max-size', '3',
                                '--checks', 'roundtrip_check,class_agreement', '--checks', 'mv_consistency')
    assert code == 0
    assert payload['verdict'] == 'pass'
    assert set(payload['data']) == {'roundtrip_check', 'class_agreement', 'mv_consistency'}


def test_corpus_command(runner):
    code, payload = invoke_json(runner, 'corpus', '--name', 'B2', '--name', 'C4')
    assert code == 0
    assert payload['data']['C4']['emit_roundtrip'] == 'pass'


def test_smallest_nondistributive_small_bound(runner, tmp_path):
    result = runner.invoke(cli, ['smallest-nondistributive', '--max-size', '4',
                                 '--checkpoint', str(tmp_path / 'nd.msgpack')])
    assert result.exit_code == 0
    assert 'no non-distributive' in result.stdout


def test_smallest_nondistributive_names_its_checkpoint(runner, tmp_path):
    help_text = runner.invoke(cli, ['smallest-nondistributive', '--help']).stdout
    assert '.semiring-checkpoints' in help_text
    assert 'checkpoint_version' in help_text
    path = tmp_path / 'nd.msgpack'
    code, payload = invoke_json(runner, 'smallest-nondistributive', '--max-size', '3', '--checkpoint', str(path))
    assert payload['inputs']['checkpoint'] == str(path)


@pytest.mark.slow
def test_smallest_nondistributive_is_seven(runner, tmp_path):
    code, payload = invoke_json(runner, 'smallest-nondistributive', '--max-size', '7',
                                '--checkpoint', str(tmp_path / 'nd.msgpack'))
    assert code == 0
    assert payload['data']['size'] == 7
    assert all(payload['details']['revalidation'].values())
    witness = AlgebraTable.from_dict(payload['certificate'])
    assert witness.size == 7
    assert parse(emit(witness)) == [witness]


def test_run_command_exit_codes(capsys):
    assert run_command(['projective', 'corpus:A3']) == 0
    assert run_command(['check', 'corpus:Nope']) == 2
    assert run_command(['enumerate']) == 2
    assert run_command(['no-such-command']) == 2
    assert 'Usage' in capsys.readouterr().err


def test_whole_corpus_reproduces():
    """Every expected verdict of the built-in corpus, end to end"""
    assert run_command(['corpus']) == 0
