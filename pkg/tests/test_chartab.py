"""Character tables: validation, structure constants, and certificates."""

import json
from fractions import Fraction

import pytest

from pairgen.census import conjugacy_classes
from pairgen.chartab import (
    CharacterTable,
    TableIntegrityError,
    cmc,
    cmc_scan,
    generation_certificate,
    lagrange_filter,
    make_table,
    phi_divisibility,
    validate,
)
from pairgen.cyclo import from_rational, parse_cyclotomic
from pairgen.io import data_path, load_perm_file
from pairgen.perm import build_chain, compose, enumerate_elements


def load_table(name):
    raw = json.loads(data_path("chartab", f"{name}.json").read_text())
    return make_table(
        int(raw["group_order"]),
        [(c["name"], c["element_order"], c["centralizer_order"])
         for c in raw["classes"]],
        [[parse_cyclotomic(v) for v in row] for row in raw["characters"]],
        raw.get("inverse_map"),
    )


def chain_of(name, seed=0):
    return build_chain(load_perm_file(data_path("perms", f"{name}.perm")),
                       seed=seed)


def rebuilt(table, *, group_order=None, classes=None, characters=None,
            inverse_map=None):
    """Copy of a table with selected fields replaced, skipping normalization."""
    return CharacterTable(
        group_order if group_order is not None else table.group_order,
        tuple(classes) if classes is not None else table.classes,
        (tuple(tuple(row) for row in characters)
         if characters is not None else table.characters),
        tuple(inverse_map) if inverse_map is not None else table.inverse_map,
    )


def brute_tensor(chain):
    """Pair counts N[i][j][k] = #{(x, y) in C_i x C_j : x*y in C_k}."""
    classes, class_of = conjugacy_classes(chain, with_map=True)
    elements = list(enumerate_elements(chain))
    labels = [class_of(g) for g in elements]
    m = len(classes.classes)
    tensor = [[[0] * m for _ in range(m)] for _ in range(m)]
    for x, i in zip(elements, labels):
        for y, j in zip(elements, labels):
            tensor[i][j][class_of(compose(x, y))] += 1
    return classes, tensor


def match_columns(table, classes):
    """Map 0-based census class index -> 1-based table column.

    Matching is by (element order, class size).  Ties (algebraically
    conjugate classes like the two 5-element classes of A5) may be paired
    either way: the structure constants are invariant under swapping such
    a pair in all three slots at once.
    """
    pool = {}
    for col, cls in enumerate(table.classes, 1):
        pool.setdefault((cls.element_order, table.class_size(col)),
                        []).append(col)
    out = [pool[(c.order, c.size)].pop(0) for c in classes.classes]
    assert not any(pool.values()), "table has classes the group does not"
    return out


@pytest.fixture(scope="module")
def s3_table():
    return load_table("s3")


@pytest.fixture(scope="module")
def a5_table():
    return load_table("a5")


@pytest.fixture(scope="module")
def a5_chain():
    return chain_of("a5")


# -- fixture integrity -------------------------------------------------------------

def test_validate_s3_fixture(s3_table):
    report = validate(s3_table)
    assert report.ok
    assert str(report) == "table valid"


def test_validate_a5_fixture(a5_table):
    assert validate(a5_table).ok


def test_validate_trivial_table():
    assert validate(make_table(1, [("1A", 1, 1)], [[1]])).ok


def test_s3_inverse_map_is_derived(s3_table):
    raw = json.loads(data_path("chartab", "s3.json").read_text())
    assert "inverse_map" not in raw
    assert s3_table.inverse_map == (1, 2, 3)


def test_a5_inverse_map_derivation_matches_fixture(a5_table):
    derived = make_table(a5_table.group_order, a5_table.classes,
                         a5_table.characters)
    assert derived.inverse_map == a5_table.inverse_map == (1, 2, 3, 4, 5)


def test_inverse_map_derivation_ambiguity_is_an_error():
    classes = [("1A", 1, 12), ("4A", 4, 4), ("4B", 4, 4)]
    characters = [[1, 1, 1], [2, -1, -1]]
    with pytest.raises(ValueError, match="ambiguous"):
        make_table(12, classes, characters)


def test_make_table_rejects_ragged_rows():
    with pytest.raises(ValueError, match="one value per class"):
        make_table(6, [("1A", 1, 6), ("2A", 2, 2)], [[1, 1], [1]])


def test_class_named(a5_table):
    assert a5_table.class_named("5B") == 5
    with pytest.raises(KeyError):
        a5_table.class_named("9Z")


def test_class_size(a5_table):
    assert [a5_table.class_size(k) for k in range(1, 6)] == [1, 15, 20, 12, 12]


# -- validation failures ------------------------------------------------------------

@pytest.mark.parametrize("name", ["s3", "a5"])
def test_every_single_value_perturbation_fails(name):
    table = load_table(name)
    m = table.n_classes()
    for i in range(m):
        for k in range(m):
            chars = [list(row) for row in table.characters]
            chars[i][k] = chars[i][k] + from_rational(1)
            assert not validate(rebuilt(table, characters=chars)).ok, (i, k)


def test_perturbation_failure_names_the_class(a5_table):
    chars = [list(row) for row in a5_table.characters]
    chars[1][2] = chars[1][2] + from_rational(1)
    report = validate(rebuilt(a5_table, characters=chars))
    assert any("column orthogonality" in f and "3" in f for f in report.failures)


def test_perturbed_centralizer_fails(s3_table):
    classes = list(s3_table.classes)
    classes[1] = type(classes[1])("2A", 2, 4)
    report = validate(rebuilt(s3_table, classes=classes))
    assert any("does not divide" in f for f in report.failures)


def test_wrong_group_order_fails(s3_table):
    assert not validate(rebuilt(s3_table, group_order=12)).ok


def test_nonsquare_table_fails(s3_table):
    report = validate(rebuilt(s3_table, characters=s3_table.characters[:2]))
    assert any("square" in f for f in report.failures)


def test_inverse_map_not_a_permutation(s3_table):
    report = validate(rebuilt(s3_table, inverse_map=(1, 1, 2)))
    assert any("not a permutation" in f for f in report.failures)


def test_inverse_map_must_fix_identity_class(s3_table):
    report = validate(rebuilt(s3_table, inverse_map=(2, 1, 3)))
    assert any("does not fix class 1" in f for f in report.failures)


def test_inverse_map_conjugate_mismatch(s3_table):
    report = validate(rebuilt(s3_table, inverse_map=(1, 3, 2)))
    assert any("inconsistent with the inverse map" in f
               for f in report.failures)


# -- structure constants -----------------------------------------------------------

@pytest.mark.parametrize("name", ["s3", "a5"])
def test_identity_class_forces_equal_classes(name):
    table = load_table(name)
    m = table.n_classes()
    for j in range(1, m + 1):
        for k in range(1, m + 1):
            assert cmc(table, 1, j, k) == (1 if j == k else 0)


def test_cmc_index_errors(s3_table):
    with pytest.raises(ValueError, match="out of range"):
        cmc(s3_table, 0, 1, 1)
    with pytest.raises(ValueError, match="out of range"):
        cmc(s3_table, 1, 1, 4)


def test_cmc_rejects_non_integer_result(s3_table):
    chars = [list(row) for row in s3_table.characters]
    chars[2][2] = from_rational(Fraction(1, 2))
    broken = rebuilt(s3_table, characters=chars)
    with pytest.raises(TableIntegrityError):
        cmc(broken, 3, 3, 1)


def test_cmc_rejects_zero_degree(s3_table):
    chars = [list(row) for row in s3_table.characters]
    chars[2][0] = from_rational(0)
    with pytest.raises(TableIntegrityError):
        cmc(rebuilt(s3_table, characters=chars), 2, 2, 1)


@pytest.mark.parametrize("name", ["s3", "a5"])
def test_cmc_row_sums_and_symmetry(name):
    table = load_table(name)
    m = table.n_classes()
    for i in range(1, m + 1):
        for j in range(1, m + 1):
            total = sum(cmc(table, i, j, k) * table.class_size(k)
                        for k in range(1, m + 1))
            assert total == table.class_size(i) * table.class_size(j)
            for k in range(1, m + 1):
                assert cmc(table, i, j, k) == cmc(table, j, i, k)


def test_cmc_matches_brute_force_s3(s3_table):
    chain = chain_of("s3")
    classes, tensor = brute_tensor(chain)
    cols = match_columns(s3_table, classes)
    m = len(cols)
    for a in range(m):
        for b in range(m):
            for c in range(m):
                size = classes.classes[c].size
                assert tensor[a][b][c] % size == 0
                assert (cmc(s3_table, cols[a], cols[b], cols[c])
                        == tensor[a][b][c] // size)


def test_cmc_matches_brute_force_a5(a5_table, a5_chain):
    classes, tensor = brute_tensor(a5_chain)
    cols = match_columns(a5_table, classes)
    m = len(cols)
    for a in range(m):
        for b in range(m):
            for c in range(m):
                size = classes.classes[c].size
                assert tensor[a][b][c] % size == 0
                assert (cmc(a5_table, cols[a], cols[b], cols[c])
                        == tensor[a][b][c] // size)


def test_cmc_a5_involution_pairs_hitting_a_fixed_three_cycle(a5_table,
                                                             a5_chain):
    involutions = [g for g in enumerate_elements(a5_chain) if g.order() == 2]
    assert len(involutions) == 15
    z = next(g for g in enumerate_elements(a5_chain) if g.order() == 3)
    count = sum(1 for x in involutions for y in involutions
                if compose(x, y) == z)
    assert cmc(a5_table, 2, 2, 3) == count


# -- scans -------------------------------------------------------------------------

def test_scan_involutions_onto_identity(a5_table):
    report = cmc_scan(a5_table, 2, 1)
    assert report.i == 2 and report.k == 1
    assert report.values == (0, 15, 0, 0, 0)
    assert report.nonzero == (False, True, False, False, False)
    assert report.nonzero_classes() == (2,)


def test_scan_s3_transpositions_onto_rotations(s3_table):
    report = cmc_scan(s3_table, 2, 3)
    assert report.values == (0, 3, 0)
    assert report.nonzero_classes() == (2,)


def test_scan_agrees_with_pointwise_cmc(a5_table):
    report = cmc_scan(a5_table, 3, 4)
    for j, value in enumerate(report.values, 1):
        assert value == cmc(a5_table, 3, j, 4)


# -- order filters -----------------------------------------------------------------

def test_lagrange_filter_examples():
    orders = [("a", 6), ("b", 10), ("c", 15)]
    assert lagrange_filter(orders, [5]) == ["b", "c"]
    assert lagrange_filter(orders, []) == ["a", "b", "c"]
    assert lagrange_filter(orders, [2, 5]) == ["b"]
    assert lagrange_filter([], [7]) == []


def test_lagrange_filter_a5_maximals():
    maximals = [("A4", 12), ("D10", 10), ("S3", 6)]
    assert lagrange_filter(maximals, [5]) == ["D10"]


def test_phi_divisibility_47():
    assert phi_divisibility(47, 2, 22) == set()
    assert phi_divisibility(47, 3, 22) == set()
    assert phi_divisibility(47, 2, 23) == {23}


def test_phi_divisibility_small():
    assert phi_divisibility(7, 2, 3) == {3}
    assert phi_divisibility(3, 2, 8) == {2, 6}
    assert phi_divisibility(5, 2, 0) == set()


def test_phi_divisibility_argument_errors():
    with pytest.raises(ValueError, match="not prime"):
        phi_divisibility(46, 2, 10)
    with pytest.raises(ValueError, match="at least 2"):
        phi_divisibility(47, 1, 10)
    with pytest.raises(ValueError, match="0..10000"):
        phi_divisibility(47, 2, 10**4 + 1)


# -- generation certificates --------------------------------------------------------

def test_certificate_a5(a5_table):
    maximals = [("A4", 12), ("D10", 10), ("S3", 6)]
    cert = generation_certificate(a5_table, [2], 4, maximals, 5)
    assert cert.witness_class == 4
    assert cert.witness_order == 5
    assert cert.filter_survivors == ("D10",)
    assert cert.order_p_classes == (4, 5)
    assert set(cert.scans) == {2}
    assert cert.scans[2] == cmc_scan(a5_table, 2, 4)
    expected = tuple(j for j in (4, 5) if cmc(a5_table, 2, j, 4) > 0)
    assert cert.covered_classes == expected
    assert "D10" in cert.text
    assert "5A" in cert.text


def test_certificate_empty_involution_list(a5_table):
    cert = generation_certificate(a5_table, [], 4,
                                  [("A4", 12), ("D10", 10), ("S3", 6)], 5)
    assert cert.scans == {}
    assert cert.covered_classes == ()
    assert cert.filter_survivors == ("D10",)
    assert "scan section empty" in cert.text


def test_certificate_index_error(a5_table):
    with pytest.raises(ValueError, match="out of range"):
        generation_certificate(a5_table, [2], 9, [], 5)
