import numpy as np
import pytest

from source.apps.cli.corpus import lookup
from source.apps.core.exceptions import InputError, UnsupportedError
from source.apps.core.models import AlgebraTable, Poset
from source.apps.core.services import Report
from source.apps.core.tables import (
    canonical_key,
    derived_meet,
    greatest_element,
    irreducibles_of,
    is_lattice_distributive,
    is_self_dual,
    join_table,
    lattice_key,
    least_element,
    leq_matrix,
    meet_from_join,
    order_from_join,
    validate,
)
from source.apps.enumerate.lattices import enumerate_lattices

SQUARE_WITH_TOP = [[0, 1, 2, 3, 4],
                   [1, 1, 3, 3, 4],
                   [2, 3, 2, 3, 4],
                   [3, 3, 3, 3, 4],
                   [4, 4, 4, 4, 4]]


def test_corpus_algebras_validate(b2, a3, c4, l3, b2xb2):
    """Every built-in algebra is a semiring with unit"""
    for a in (b2, a3, c4, l3, b2xb2):
        assert validate(a).success, a.name


def test_tables_are_read_only(c4):
    with pytest.raises(ValueError):
        c4.mult[0, 0] = 1


def test_out_of_range_entry_is_rejected():
    with pytest.raises(InputError) as excinfo:
        AlgebraTable.from_lists('bad', join=[[0, 1], [1, 2]], mult=[[0, 0], [0, 1]], one=1)
    assert 'join[1][1]' in str(excinfo.value)


def test_ragged_table_is_rejected():
    with pytest.raises(InputError):
        AlgebraTable.from_lists('bad', join=[[0, 1], [1]], mult=[[0, 0], [0, 1]], one=1)


def test_missing_unit_is_reported_with_witness():
    a = AlgebraTable.from_lists('no-unit', join=[[0, 1], [1, 1]], mult=[[0, 0], [0, 0]], one=1, zero=0)
    report = validate(a)
    assert report.failed
    assert report.details['law'] == 'left unit'
    assert report.witness == (1,)


def test_order_and_bounds(c4):
    leq = leq_matrix(c4)
    assert leq[0].all() and leq[:, 3].all()
    assert least_element(c4) == 0
    assert greatest_element(c4) == 3
    assert order_from_join(c4).is_partial_order()


def test_poset_helpers(c4):
    p = order_from_join(c4)
    assert p.below(2) == [0, 1, 2]
    assert p.above(2) == [2, 3]
    assert p.lt(1, 2) and not p.lt(2, 2)


def test_not_a_partial_order():
    p = Poset(2, [[True, True], [True, True]])
    assert not p.is_partial_order()


def test_meet_of_a_chain_is_min(c4):
    meet = meet_from_join(c4)
    ar = np.arange(4)
    assert np.array_equal(meet, np.minimum(ar[:, None], ar[None, :]))


def test_derived_meet_of_the_two_atoms_is_the_bottom(b2xb2):
    atoms = irreducibles_of(b2xb2)
    assert derived_meet(b2xb2, *atoms) == least_element(b2xb2)
    assert derived_meet(b2xb2, atoms[0], greatest_element(b2xb2)) == atoms[0]


def test_meet_needs_a_least_element():
    two_atoms = np.array([[0, 2, 2], [2, 1, 2], [2, 2, 2]])
    with pytest.raises(UnsupportedError):
        meet_from_join(two_atoms)


def test_join_irreducibles_of_the_square(b2xb2):
    assert irreducibles_of(b2xb2) == [1, 2]


def assert_joins_of_irreducibles(structure):
    join = join_table(structure)
    leq = leq_matrix(join)
    irreducibles = irreducibles_of(join)
    for x in range(join.shape[0]):
        below = least_element(join)
        for j in irreducibles:
            if leq[j, x]:
                below = join[below, j]
        assert below == x, (x, irreducibles)


def test_every_element_is_a_join_of_irreducibles(b2, a3, c4, l3, b2xb2, m3):
    for structure in (b2, a3, c4, l3, b2xb2, m3):
        assert_joins_of_irreducibles(structure)
    for join in enumerate_lattices(5):
        assert_joins_of_irreducibles(join)


def test_diamond_is_not_distributive(m3, c4):
    assert is_lattice_distributive(c4).success
    report = is_lattice_distributive(m3)
    assert report.failed
    assert report.witness is not None


def test_self_duality(m3):
    assert is_self_dual(m3.join)
    assert not is_self_dual(np.array(SQUARE_WITH_TOP))


def test_canonical_key_is_relabelling_invariant(c4):
    relabelled = c4.permuted([0, 2, 1, 3])
    assert not np.array_equal(relabelled.mult, c4.mult)
    assert canonical_key(relabelled) == canonical_key(c4)


@pytest.mark.parametrize('name', ['B2', 'A3', 'C4', 'L3', 'B2xB2'])
def test_canonical_key_survives_random_relabellings(name):
    """A hundred seeded relabellings of each corpus algebra share one key"""
    a = lookup(f'corpus:{name}').structure
    key = canonical_key(a)
    rng = np.random.default_rng(2024)
    for _ in range(100):
        perm = rng.permutation(a.size)
        assert canonical_key(a.permuted(perm)) == key, perm.tolist()


def test_canonical_key_separates_non_isomorphic(l3, a3):
    assert canonical_key(l3) != canonical_key(a3)


def test_lattice_key_ignores_multiplication(a3, l3):
    assert lattice_key(a3) == lattice_key(l3)


def test_permuted_rejects_non_permutations(c4):
    with pytest.raises(InputError):
        c4.permuted([0, 0, 1, 2])


def test_equality_ignores_names(c4):
    assert c4.with_(name='other') == c4
    assert c4 != c4.with_(lneg=None, rneg=None)


def test_dict_form_restores_the_table(c4):
    restored = AlgebraTable.from_dict(c4.to_lists())
    assert restored == c4
    assert restored.display == c4.display


def test_index_of_resolves_names_and_indices(c4):
    assert c4.index_of('b') == 2
    assert c4.index_of('3') == 3
    with pytest.raises(InputError):
        c4.index_of('z')


def test_report_shape():
    report = Report.failed_with('demo', 'broken', (np.int64(1), 'x'))
    data = report.to_dict()
    assert data['verdict'] == 'fail'
    assert data['witness'] == [1, 'x']
    assert Report.value('size', 3).verdict == 'value'
