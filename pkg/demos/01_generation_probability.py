"""
Exact (2,p) generation probabilities
====================================

Pick a random involution x and a random element y of odd prime order p:
how often does the pair (x, y) generate the whole group?  This script
computes the exact answer for A5 and M11 and shows the class-fixing
reduction that makes it affordable.
"""

from pairgen.census import conjugacy_classes, order_census
from pairgen.genprob import gen_probability, generating_pair_count, \
    naive_pair_count
from pairgen.io import load_bundle

# A5 first: small enough to check the answer by brute force.
a5 = load_bundle("a5").build()
print(f"A5: degree {a5.degree}, order {a5.group_order}")

census = order_census(a5)
print("element orders:", {r: census.n(r) for r in census.orders()})

# The scan fixes ONE representative per conjugacy class of order-r
# elements and multiplies its hit count by the class size; conjugation
# symmetry makes this exact, at 1/|class| of the naive cost.
classes = conjugacy_classes(a5)
for p in (3, 5):
    fast = generating_pair_count(a5, classes, 2, p)
    slow = naive_pair_count(a5, 2, p)
    assert fast == slow
    result = gen_probability(a5, classes, 2, p)
    print(f"pi(2,{p}) = {result.generating_pairs}/{result.total_pairs}"
          f" = {result.probability} = {result.decimal5}")

# Same computation for the Mathieu group M11 (order 7920).  The naive
# double loop would test ~10^6 pairs per prime; the class-fixed scan
# tests one representative per class.
m11 = load_bundle("m11").build()
classes = conjugacy_classes(m11)
print(f"\nM11: degree {m11.degree}, order {m11.group_order}")
for p in (3, 5, 11):
    result = gen_probability(m11, classes, 2, p)
    print(f"pi(2,{p}) = {result.probability} = {result.decimal5}")

# pi(2,3) = 0 is not an accident: every (involution, 3-element) pair of
# M11 lies in a proper subgroup, so no such pair can generate.
