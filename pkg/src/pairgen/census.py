"""Exact element-order statistics and conjugacy classes.

``order_census`` counts elements of each order by streaming the full
enumeration (memory stays O(degree)); ``census_from_table`` recomputes the
same counts from ingested class data, which may cover only some orders
(published headers usually list a handful of primes).  A census therefore
carries a ``complete`` flag; global invariants are asserted only when the
class data accounted for every element.
"""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .perm import EnumerationLimitError, Permutation, StabilizerChain
from .perm import _stream_batches  # package-internal streaming

__all__ = [
    "OrderCensus",
    "ConjugacyClass",
    "ConjugacyClassList",
    "ConjugacyClassData",
    "order_census",
    "census_from_table",
    "conjugacy_classes",
    "pair_count",
]

DEFAULT_ENUM_LIMIT = 10**8
DEFAULT_CLASS_LIMIT = 10**7

# numpy's int64 lcm is safe while every possible cycle-length lcm fits;
# Landau's function stays below 2^63 up to degree 300
_VECTOR_ORDER_DEGREE = 300


@dataclass(frozen=True)
class OrderCensus:
    """Map from element order r to the exact count n_r.

    ``complete`` means the counts account for every group element; only
    then do the global identities (sum, identity count, involution parity)
    apply.  Partial censuses arise from ingested class data covering a few
    orders and report 0 for unlisted orders.
    """

    group_order: int
    counts: dict[int, int]
    complete: bool = True

    def __post_init__(self):
        if self.group_order < 1:
            raise ValueError("group order must be positive")
        total = 0
        for r, c in self.counts.items():
            if r < 1 or c < 0:
                raise ValueError(f"bad census entry n_{r} = {c}")
            if c > 0 and self.group_order % r:
                raise ValueError(
                    f"n_{r} = {c} > 0 but {r} does not divide the group "
                    f"order {self.group_order}")
            total += c
        if self.complete:
            if total != self.group_order:
                raise ValueError(
                    f"census counts sum to {total}, not the group order "
                    f"{self.group_order}")
            if self.counts.get(1, 0) != 1:
                raise ValueError("a complete census must count one identity")
            # non-involutions pair off with their inverses
            if (self.group_order - 1 - self.counts.get(2, 0)) % 2:
                raise ValueError("parity violation: |G| - n_1 - n_2 is odd")
        elif total > self.group_order:
            raise ValueError(
                f"census counts sum to {total}, exceeding the group order "
                f"{self.group_order}")

    def n(self, r: int) -> int:
        """Exact number of elements of order r (0 when absent)."""
        return self.counts.get(r, 0)

    def orders(self) -> list[int]:
        return sorted(r for r, c in self.counts.items() if c)


@dataclass(frozen=True)
class ConjugacyClass:
    representative: Permutation
    size: int
    order: int


@dataclass(frozen=True)
class ConjugacyClassList:
    """Conjugacy classes, sorted by (element order, size, discovery).

    ``orders`` is None for a full partition of the group; otherwise it
    records the restriction that was applied (only elements with those
    orders were classified).
    """

    group_order: int
    classes: tuple[ConjugacyClass, ...]
    orders: frozenset[int] | None = None

    def __post_init__(self):
        for cls in self.classes:
            if cls.representative.order() != cls.order:
                raise ValueError("class representative order mismatch")
            if self.group_order % cls.size:
                raise ValueError(
                    f"class size {cls.size} does not divide the group order")
        if self.orders is None:
            total = sum(c.size for c in self.classes)
            if total != self.group_order:
                raise ValueError(
                    f"class sizes sum to {total}, not the group order "
                    f"{self.group_order}")

    def of_order(self, r: int) -> tuple[ConjugacyClass, ...]:
        if self.orders is not None and r not in self.orders:
            raise ValueError(
                f"class list was restricted to orders {sorted(self.orders)}; "
                f"order {r} classes are not available")
        return tuple(c for c in self.classes if c.order == r)


@dataclass(frozen=True)
class ConjugacyClassData:
    """Ingested class headers: (element order, centralizer order) pairs."""

    group_order: int
    classes: tuple[tuple[int, int], ...]


# ---------------------------------------------------------------------------
# Vectorized element orders.
# ---------------------------------------------------------------------------


def _block_orders(block: np.ndarray) -> np.ndarray:
    """Orders of a block of permutations (rows), as int64."""
    n, d = block.shape
    idx = np.arange(d, dtype=block.dtype)
    lengths = np.zeros((n, d), dtype=np.int64)
    x = block
    open_ = np.ones((n, d), dtype=bool)
    k = 1
    while True:
        closed = open_ & (x == idx)
        lengths[closed] = k
        open_ &= ~closed
        if not open_.any():
            break
        x = np.take_along_axis(block, x, axis=1)
        k += 1
    if d <= _VECTOR_ORDER_DEGREE:
        return np.lcm.reduce(lengths, axis=1)
    return np.array([math.lcm(*set(row)) for row in lengths.tolist()],
                    dtype=np.int64)


def _count_range(chain: StabilizerChain, start: int, stop: int,
                 batch: int = 4096) -> Counter:
    out: Counter = Counter()
    for block in _stream_batches(chain._raw, batch=batch, start=start,
                                 stop=stop):
        orders, counts = np.unique(_block_orders(block), return_counts=True)
        for r, c in zip(orders.tolist(), counts.tolist()):
            out[r] += c
    return out


def order_census(chain: StabilizerChain, limit: int = DEFAULT_ENUM_LIMIT,
                 threads: int = 1) -> OrderCensus:
    """Census by full enumeration: counts[r] = #{g : order(g) = r}.

    Streams the elements in fixed-size blocks; with ``threads`` > 1 the
    index range splits into per-worker slices whose partial counts merge
    deterministically.
    """
    order = chain.group_order
    if order > limit:
        raise EnumerationLimitError(order, limit)
    if threads <= 1 or order < 1 << 16:
        merged = _count_range(chain, 0, order)
    else:
        cuts = [order * i // threads for i in range(threads + 1)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(
                lambda span: _count_range(chain, span[0], span[1]),
                zip(cuts, cuts[1:])))
        merged = Counter()
        for part in parts:
            merged.update(part)
    return OrderCensus(order, dict(sorted(merged.items())))


def census_from_table(classes) -> OrderCensus:
    """Census from class data: counts[r] = sum of |G|/|centralizer| over
    the order-r classes.

    Accepts a ConjugacyClassData, a character table, or any object with
    ``group_order`` and ``classes`` whose items expose element and
    centralizer orders.  Counts are marked complete exactly when they sum
    to the group order.
    """
    order = int(classes.group_order)
    counts: dict[int, int] = {}
    for item in classes.classes:
        if hasattr(item, "element_order"):
            r, cent = int(item.element_order), int(item.centralizer_order)
        else:
            r, cent = int(item[0]), int(item[1])
        if cent < 1 or order % cent:
            raise ValueError(
                f"centralizer order {cent} does not divide the group order "
                f"{order}")
        counts[r] = counts.get(r, 0) + order // cent
    total = sum(counts.values())
    return OrderCensus(order, dict(sorted(counts.items())),
                       complete=(total == order))


# ---------------------------------------------------------------------------
# Conjugacy classes by conjugation orbits over the stream.
# ---------------------------------------------------------------------------


def _pack_dtype(degree: int):
    if degree <= 1 << 8:
        return np.uint8
    if degree <= 1 << 16:
        return np.uint16
    return np.int32


def conjugacy_classes(chain: StabilizerChain,
                      limit: int = DEFAULT_CLASS_LIMIT,
                      orders=None, with_map: bool = False):
    """Partition the enumerated elements into conjugacy classes.

    Each unassigned element's class is closed as its orbit under
    conjugation by the group generators.  ``orders`` restricts the
    partition to elements of the listed orders (their classes are unions
    of same-order elements, so the restriction is exact).  With
    ``with_map`` the return value is ``(class_list, class_of)`` where
    ``class_of(p)`` gives the 0-based class index of a Permutation.
    """
    order = chain.group_order
    if order > limit:
        raise EnumerationLimitError(order, limit)
    degree = chain.degree
    wanted = frozenset(int(r) for r in orders) if orders is not None else None
    pack = _pack_dtype(degree)
    gens = [g.images.astype(np.int64) for g in chain.generators
            if not g.is_identity()]
    ginvs = []
    for g in gens:
        inv = np.empty_like(g)
        inv[g] = np.arange(degree, dtype=np.int64)
        ginvs.append(inv)

    assigned: dict[bytes, int] = {}
    found: list[ConjugacyClass] = []
    for block in _stream_batches(chain._raw, batch=4096):
        if wanted is not None:
            ords = _block_orders(block)
            keep = np.isin(ords, np.array(sorted(wanted), dtype=np.int64))
            rows = block[keep]
        else:
            rows = block
        for row in rows:
            key = row.astype(pack).tobytes()
            if key in assigned:
                continue
            index = len(found)
            rep = Permutation._wrap(row.astype(np.int32).copy())
            frontier = [row.astype(np.int64)]
            assigned[key] = index
            size = 1
            while frontier:
                v = frontier.pop()
                for g, gi in zip(gens, ginvs):
                    w = g[v[gi]]
                    wkey = w.astype(pack).tobytes()
                    if wkey not in assigned:
                        assigned[wkey] = index
                        size += 1
                        frontier.append(w)
            found.append(ConjugacyClass(rep, size, rep.order()))

    ranking = sorted(range(len(found)),
                     key=lambda i: (found[i].order, found[i].size, i))
    position = {old: new for new, old in enumerate(ranking)}
    classes = ConjugacyClassList(
        group_order=order,
        classes=tuple(found[i] for i in ranking),
        orders=wanted,
    )
    if not with_map:
        return classes

    def class_of(p: Permutation) -> int:
        key = p.images.astype(pack).tobytes()
        try:
            return position[assigned[key]]
        except KeyError:
            raise KeyError("element is not in the classified set") from None

    return classes, class_of


def pair_count(census_a: OrderCensus, r: int, census_b: OrderCensus,
               s: int) -> int:
    """Number of pairs (x, y) with order(x) = r, order(y) = s: n_r * n_s."""
    if census_a.group_order != census_b.group_order:
        raise ValueError(
            "pair_count needs censuses of the same group "
            f"(orders {census_a.group_order} and {census_b.group_order})")
    return census_a.n(r) * census_b.n(s)
