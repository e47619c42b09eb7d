"""Lower bounds on pair-generation probabilities from maximal subgroups.

A pair (x, y) fails to generate G exactly when both elements land in some
maximal subgroup M.  Summing over one representative M per conjugacy class
of maximal subgroups, the number of non-generating pairs with o(x) = 2 and
o(y) = p is at most sum |G : M| * n_2(M) * n_p(M), since each of the
|G : M| conjugates of M contributes at most m(M) = n_2(M) * n_p(M) pairs.
Dividing by m(G) = n_2(G) * n_p(G) gives

    P(2, p) >= 1 - sum_M |G : M| * m(M) / m(G).

The bound only needs an order census of each maximal subgroup, never a
generation test.  Subgroup data arrives in one of three forms: explicit
generators, a word program producing generators from the parent group's
standard pair, or a precomputed census for subgroups known only through
published class data.  Overlapping subgroups are counted with multiplicity,
so the bound can go negative; it is reported as-is and flagged
uninformative.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .census import DEFAULT_ENUM_LIMIT, OrderCensus, order_census
from .perm import Permutation, StabilizerChain, build_chain, contains
from .wordprog import WordProgram, evaluate

__all__ = [
    "RecordIntegrityError",
    "MaximalSubgroupRecord",
    "BoundResult",
    "subgroup_census",
    "lower_bound",
]


class RecordIntegrityError(ValueError):
    """Subgroup data contradicts its own declared order or index."""


@dataclass(frozen=True)
class MaximalSubgroupRecord:
    """One conjugacy class of maximal subgroups of a fixed parent group.

    Exactly one source of subgroup data must be given: ``generators``
    (explicit permutations inside the parent), ``word_program`` (evaluated
    over the parent's standard generator pair; ``emission`` picks which
    emitted pair generates this subgroup), or ``census`` (a ready-made
    order census, for subgroups handed down as class data only).
    """

    name: str
    order: int
    index: int
    generators: tuple[Permutation, ...] | None = None
    word_program: WordProgram | None = None
    emission: int = 0
    census: OrderCensus | None = None

    def __post_init__(self):
        if self.order < 1 or self.index < 1:
            raise ValueError(
                f"record {self.name!r}: order and index must be positive")
        sources = (self.generators is not None) + \
            (self.word_program is not None) + (self.census is not None)
        if sources != 1:
            raise ValueError(
                f"record {self.name!r} needs exactly one of generators, "
                f"word_program, census (got {sources})")
        if self.census is not None and self.census.group_order != self.order:
            raise RecordIntegrityError(
                f"record {self.name!r}: census describes a group of order "
                f"{self.census.group_order}, record declares {self.order}")


@dataclass(frozen=True)
class BoundResult:
    """Lower bound on the probability that a (2, p) pair generates.

    ``per_class_contribution`` lists (record name, index * m(M)) terms in
    input order; their sum over m(G) is what the bound subtracts from 1.
    ``informative`` is False when the bound is <= 0 (multiplicity made the
    union estimate overshoot).
    """

    p: int
    bound: Fraction
    informative: bool
    per_class_contribution: tuple[tuple[str, int], ...]

    def __post_init__(self):
        if self.bound > 1:
            raise ValueError("a pair-counting bound cannot exceed 1")
        if self.informative != (self.bound > 0):
            raise ValueError("informative must mean a positive bound")


def subgroup_census(record: MaximalSubgroupRecord,
                    parent: StabilizerChain,
                    limit: int = DEFAULT_ENUM_LIMIT,
                    threads: int = 1) -> OrderCensus:
    """Order census of the subgroup a record describes.

    Census-only records pass through unchanged.  Otherwise the subgroup's
    generators (explicit, or the chosen emission of the word program run
    on ``parent``'s first two generators) are checked for membership in
    the parent, a chain is built, and its exact order must equal the
    record's declared order before the census is enumerated.
    """
    if record.census is not None:
        return record.census
    if record.generators is not None:
        gens = list(record.generators)
    else:
        seeds = parent.generators
        if len(seeds) < 2:
            raise ValueError(
                "word-program records need a parent chain built from its "
                "standard generator pair (x, y)")
        emitted = evaluate(record.word_program, seeds[0], seeds[1])
        if not 0 <= record.emission < len(emitted):
            raise ValueError(
                f"record {record.name!r}: emission {record.emission} out of "
                f"range; program emits {len(emitted)} subgroups")
        gens = list(emitted[record.emission])
    for g in gens:
        if not contains(parent, g):
            raise RecordIntegrityError(
                f"record {record.name!r}: generator does not lie in the "
                f"parent group")
    sub = build_chain(gens)
    if sub.group_order != record.order:
        raise RecordIntegrityError(
            f"record {record.name!r}: generators produce a group of order "
            f"{sub.group_order}, record declares {record.order}")
    return order_census(sub, limit=limit, threads=threads)


def lower_bound(group_census: OrderCensus,
                records: "list[tuple[MaximalSubgroupRecord, OrderCensus]]",
                p: int) -> BoundResult:
    """Bound P(2, p) from below using one census per maximal-subgroup class.

    ``records`` pairs each record with the census of its subgroup (see
    subgroup_census); declared order/index must factor the parent's order.
    Raises ValueError when the parent has no (2, p) pairs at all, since
    the ratio is then undefined.
    """
    if p < 2:
        raise ValueError("element order p must be at least 2")
    m_group = group_census.n(2) * group_census.n(p)
    if m_group == 0:
        raise ValueError(
            f"the group has no pairs of element orders (2, {p}); "
            f"nothing to bound")
    contributions = []
    total = 0
    for record, census in records:
        if census.group_order != record.order:
            raise RecordIntegrityError(
                f"record {record.name!r}: census describes a group of order "
                f"{census.group_order}, record declares {record.order}")
        if record.order * record.index != group_census.group_order:
            raise RecordIntegrityError(
                f"record {record.name!r}: order {record.order} * index "
                f"{record.index} != group order {group_census.group_order}")
        weight = record.index * census.n(2) * census.n(p)
        contributions.append((record.name, weight))
        total += weight
    bound = 1 - Fraction(total, m_group)
    return BoundResult(p=p, bound=bound, informative=bound > 0,
                       per_class_contribution=tuple(contributions))
