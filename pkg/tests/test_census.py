"""Order censuses, class data, and conjugacy classes."""

import json
import random

import pytest

from pairgen.census import (
    ConjugacyClassData,
    OrderCensus,
    census_from_table,
    conjugacy_classes,
    order_census,
    pair_count,
)
from pairgen.io import data_path, load_perm_file
from pairgen.perm import (
    EnumerationLimitError,
    Permutation,
    build_chain,
    compose,
    enumerate_elements,
    identity,
    random_element,
)


def perm(*cycles, degree):
    return Permutation.from_cycles(cycles, degree)


def chain_of(name, seed=0):
    return build_chain(load_perm_file(data_path("perms", f"{name}.perm")),
                       seed=seed)


@pytest.fixture(scope="module")
def m11_chain():
    return chain_of("m11")


def header_data(group):
    with open(data_path("classdata", "appendix_headers.json")) as fh:
        doc = json.load(fh)[group]
    return ConjugacyClassData(
        group_order=int(doc["group_order"]),
        classes=tuple((c["element_order"], c["centralizer_order"])
                      for c in doc["classes"]))


# -- order_census -----------------------------------------------------------------

def test_census_trivial():
    census = order_census(build_chain([identity(3)]))
    assert census.counts == {1: 1}
    assert census.complete


def test_census_s3():
    chain = build_chain([perm((0, 1), degree=3), perm((0, 1, 2), degree=3)])
    assert order_census(chain).counts == {1: 1, 2: 3, 3: 2}


def test_census_j1_late_orders():
    chain = chain_of("j1")
    census = order_census(chain, threads=2)
    # three classes of order 19, each of size |G|/19
    assert census.n(19) == 3 * 175560 // 19
    assert census.n(2) == 1463
    assert sum(census.counts.values()) == 175560


def test_census_limit_refusal(m11_chain):
    with pytest.raises(EnumerationLimitError):
        order_census(m11_chain, limit=100)


def test_census_thread_merge_matches_serial(m11_chain):
    # force the threaded path by lowering nothing: group is over 2^16
    assert order_census(m11_chain, threads=3).counts == \
        order_census(m11_chain, threads=1).counts


def test_census_parity_invariant_enforced():
    with pytest.raises(ValueError):
        OrderCensus(6, {1: 1, 2: 2, 3: 3})  # 6 - 1 - 2 odd
    with pytest.raises(ValueError):
        OrderCensus(6, {1: 1, 2: 3, 4: 2})  # 4 does not divide 6


def test_census_lagrange_guard():
    with pytest.raises(ValueError):
        OrderCensus(10, {1: 1, 2: 1, 3: 8}, complete=False)


# -- census_from_table -----------------------------------------------------------

def test_from_table_co1_order_11():
    data = header_data("co1")
    census = census_from_table(data)
    assert census.n(11) == data.group_order // 66
    assert not census.complete


def test_from_table_j4_order_3():
    data = header_data("j4")
    census = census_from_table(data)
    assert census.n(3) == data.group_order // 2661120


def test_from_table_rejects_bad_centralizer():
    data = ConjugacyClassData(12, ((2, 5),))
    with pytest.raises(ValueError):
        census_from_table(data)


def test_from_table_agrees_with_enumeration(m11_chain):
    classes = conjugacy_classes(m11_chain)
    data = ConjugacyClassData(
        group_order=7920,
        classes=tuple((c.order, 7920 // c.size) for c in classes.classes))
    table_census = census_from_table(data)
    assert table_census.complete
    assert table_census.counts == order_census(m11_chain).counts


# -- conjugacy_classes --------------------------------------------------------------

def test_classes_s3():
    chain = build_chain([perm((0, 1), degree=3), perm((0, 1, 2), degree=3)])
    classes = conjugacy_classes(chain)
    assert [(c.order, c.size) for c in classes.classes] == \
        [(1, 1), (2, 3), (3, 2)]


def test_classes_a4():
    chain = chain_of("a4")
    sizes = [c.size for c in conjugacy_classes(chain).classes]
    assert sizes == [1, 3, 4, 4]


def test_classes_a5_against_brute_force():
    chain = chain_of("a5")
    classes = conjugacy_classes(chain)
    assert [c.size for c in classes.classes] == [1, 15, 20, 12, 12]
    # independent oracle: close each element's class by conjugating with
    # every group element directly
    elements = list(enumerate_elements(chain))
    remaining = set(elements)
    brute_sizes = []
    while remaining:
        x = next(iter(remaining))
        orbit = {compose(compose(g.inverse(), x), g) for g in elements}
        assert orbit <= remaining
        brute_sizes.append(len(orbit))
        remaining -= orbit
    assert sorted(brute_sizes) == sorted(c.size for c in classes.classes)


def test_classes_restricted_to_orders(m11_chain):
    restricted = conjugacy_classes(m11_chain, orders={2, 11})
    assert {c.order for c in restricted.classes} == {2, 11}
    assert sum(c.size for c in restricted.classes if c.order == 2) == 165
    # M11 has two classes of order 11, fused only in M11:2
    assert len(restricted.of_order(11)) == 2
    with pytest.raises(ValueError):
        restricted.of_order(3)


def test_class_map(m11_chain):
    classes, class_of = conjugacy_classes(m11_chain, orders={2},
                                          with_map=True)
    rep = classes.classes[0].representative
    rng = random.Random(9)
    for _ in range(20):
        g = random_element(m11_chain, rng)
        conj = compose(compose(g.inverse(), rep), g)
        assert class_of(conj) == 0


def test_class_signature_stable_under_conjugation(m11_chain):
    classes = conjugacy_classes(m11_chain, orders={2, 3})
    rng = random.Random(5)
    for cls in classes.classes:
        for _ in range(100):
            g = random_element(m11_chain, rng)
            conj = compose(compose(g.inverse(), cls.representative), g)
            assert conj.order() == cls.order


# -- pair_count -----------------------------------------------------------------------

def test_pair_count_examples(m11_chain):
    s3 = build_chain([perm((0, 1), degree=3), perm((0, 1, 2), degree=3)])
    c = order_census(s3)
    assert pair_count(c, 2, c, 3) == 6
    assert pair_count(c, 1, c, 1) == 1
    assert pair_count(c, 5, c, 2) == 0  # absent order counts zero
    m11 = order_census(m11_chain)
    assert m11.n(11) == 2 * 7920 // 11
    assert pair_count(m11, 2, m11, 11) == 165 * 1440


def test_pair_count_group_mismatch():
    a = OrderCensus(1, {1: 1})
    b = OrderCensus(2, {1: 1, 2: 1})
    with pytest.raises(ValueError):
        pair_count(a, 1, b, 1)
