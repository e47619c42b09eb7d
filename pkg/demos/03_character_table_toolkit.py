"""
Character tables: validation and class multiplication
=====================================================

Character-table entries live in cyclotomic fields, so every check here
is exact: orthogonality relations validate an ingested table, and the
structure-constant formula turns its columns into pair counts without
touching a single group element.
"""

from pairgen.census import conjugacy_classes
from pairgen.chartab import cmc, cmc_scan, phi_divisibility, validate
from pairgen.io import data_path, load_bundle, load_character_table
from pairgen.perm import compose, enumerate_elements

table = load_character_table(data_path("chartab", "a5.json"))
print(f"A5 table: {table.n_classes()} classes, group order "
      f"{table.group_order}")

# Row and column orthogonality over the cyclotomics; the loader already
# ran this, shown here as the standalone check it is.
print("validation:", validate(table))

# cmc(i, j, k) = number of ways a FIXED element of class k factors as
# x * y with x in class i (here the involutions) and y in class j.
i = table.class_named("2A")
k = table.class_named("3A")
scan = cmc_scan(table, i, k)
by_order = {}
for cls, value in zip(table.classes, scan.values):
    by_order[cls.element_order] = by_order.get(cls.element_order, 0) + value
for r, value in sorted(by_order.items()):
    print(f"  x in 2A, o(y) = {r}, xy in 3A: {value} pairs")

# The same numbers by exhaustive composition of all 60*60 pairs
# (summed per element order of y, which is independent of how the two
# order-5 classes are labelled).
chain = load_bundle("a5").build()
classes, class_of = conjugacy_classes(chain, with_map=True)
elements = list(enumerate_elements(chain))
labels = [class_of(g) for g in elements]
involutions = next(n for n, c in enumerate(classes.classes) if c.order == 2)
rep = next(c.representative for c in classes.classes if c.order == 3)
counts = {c.order: 0 for c in classes.classes}
for x, lx in zip(elements, labels):
    if lx != involutions:
        continue
    for y in elements:
        if compose(x, y) == rep:
            counts[y.order()] = counts.get(y.order(), 0) + 1
for r, value in sorted(counts.items()):
    print(f"  brute force, o(y) = {r}: {value} pairs")

# Cyclotomic divisibility filter: which Phi_n(q) does a prime p divide?
# This is how element orders in groups of Lie type over GF(q) are
# screened for a given prime.
for q in (2, 3, 4, 5):
    hits = phi_divisibility(47, q, 10**3)
    print(f"47 | Phi_n({q}) for n = {sorted(hits)}")
