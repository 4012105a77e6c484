import pytest

from source.apps.cli.formats import emit, emit_document, parse
from source.apps.core.exceptions import InputError
from source.apps.semimodules.services import free, regular
from source.apps.termeq.services import invsr_to_irl

TWO_CHAIN = """\
# the Boolean semifield
algebra T
size 2
elements bot top
join
  0 1
  1 1
mult
  0 0
  0 1
one 1      # unit
zero 0
lneg 1 0
rneg 1 0
end
"""


def test_parse_reads_every_field():
    (a,) = parse(TWO_CHAIN)
    assert a.name == 'T'
    assert a.display == ('bot', 'top')
    assert a.one == 1 and a.zero == 0
    assert a.lneg.tolist() == [1, 0]


def test_emit_then_parse_reproduces_algebras(b2, a3, c4, l3, b2xb2):
    for a in (b2, a3, c4, l3, b2xb2):
        (back,) = parse(emit(a))
        assert back == a
        assert back.display == a.display


def test_documents_carry_the_algebra_of_each_semimodule(c4, m3):
    text = emit_document([m3, regular(c4), free(c4, 2)])
    parsed = parse(text)
    assert [s.name for s in parsed] == ['B2', 'M3', 'C4', 'regular(C4)', 'free(C4,2)']
    assert parsed[1] == m3
    assert parsed[4] == free(c4, 2)


def test_semimodules_may_refer_to_known_algebras(b2, m3):
    block = emit(m3)
    with pytest.raises(InputError) as excinfo:
        parse(block)
    assert 'unknown algebra' in str(excinfo.value)
    assert parse(block, known=[b2]) == [m3]


def test_derived_tables_survive(l3):
    irl = invsr_to_irl(l3)
    (back,) = parse(emit(irl))
    assert back == irl


@pytest.mark.parametrize('text, fragment', [
    ('', 'no algebra or semimodule found'),
    ('algebra X\nsize 2\n', "missing 'end'"),
    ('algebra X\nsize 2\njoin\n0 1\n1 1\nend\n', "missing 'mult'"),
    ('algebra X\njoin\n', 'join before size'),
    ('algebra X\nsize 2\nsize 2\n', 'size given twice'),
    ('algebra X\nsize 2\njoin\n0 2\n', 'line 4'),
    ('algebra X\nsize 2\njoin\n0 1\nmult\n', 'join has 1 rows, expected 2'),
    ('algebra X\nsize 2\nfrobnicate 3\n', "unknown keyword 'frobnicate'"),
    ('lattice X\n', "a block starts with 'algebra' or 'semimodule'"),
    ('algebra X\nsize two\n', "expects integer indices"),
    ('algebra X\nsize 2\nelements a\n', 'elements lists 1 names, expected 2'),
    ('semimodule M over Nowhere\n', "unknown algebra 'Nowhere'"),
])
def test_parse_errors_name_the_problem(text, fragment):
    with pytest.raises(InputError) as excinfo:
        parse(text)
    assert fragment in str(excinfo.value)


def test_out_of_range_constants_carry_their_line():
    text = 'algebra X\nsize 2\njoin\n0 1\n1 1\nmult\n0 0\n0 1\none 5\nend\n'
    with pytest.raises(InputError) as excinfo:
        parse(text)
    assert str(excinfo.value).startswith('line 9')


def test_names_with_spaces_cannot_be_emitted(b2):
    with pytest.raises(InputError):
        emit(b2.with_(display=('zero', 'the one')))
