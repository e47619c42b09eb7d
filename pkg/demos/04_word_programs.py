"""
Word programs: subgroup generators as words in (x, y)
=====================================================

Maximal subgroups of big groups are published not as permutation lists
but as straight-line programs: short register programs that build the
subgroup's generators out of the group's standard generator pair.  This
script parses one, runs it inside M11 and identifies what it produced.
"""

from pairgen.census import order_census
from pairgen.io import data_path, load_bundle
from pairgen.perm import build_chain
from pairgen.wordprog import evaluate, parse_program

source = data_path("wordprog", "m11_l2_11.w").read_text()
print(source)

program = parse_program(source)
print(f"registers used: {sorted(program.registers_used())}")
print(f"emissions: {len(program.emissions)}")

# Run it on the standard generators of M11.  Each emission is a pair of
# permutations generating one recorded subgroup.
m11 = load_bundle("m11").build()
x, y = m11.generators
((a, b),) = evaluate(program, x, y)

sub = build_chain([a, b])
print(f"\nemitted subgroup: order {sub.group_order} "
      f"(index {m11.group_order // sub.group_order} in M11)")

# Order 660 with this census pins it down as L2(11), the point
# stabilizer of M11's 3-transitive action on 12 points.
census = order_census(sub)
print("element orders:", {r: census.n(r) for r in census.orders()})
