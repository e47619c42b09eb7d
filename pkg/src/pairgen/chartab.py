"""Character tables: validation, class multiplication coefficients, and
subgroup-elimination certificates.

Class indices are 1-based in every public signature, matching the habit of
computer-algebra character-table commands.  All arithmetic is exact: values
are cyclotomic numbers, results of the structure-constant formula must
reduce to non-negative rational integers or the table is rejected.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .cyclo import CyclotomicNumber, cyclotomic_polynomial, from_rational

__all__ = [
    "ClassInfo",
    "CharacterTable",
    "TableIntegrityError",
    "ValidationReport",
    "CmcScanReport",
    "GenerationCertificate",
    "make_table",
    "validate",
    "cmc",
    "cmc_scan",
    "lagrange_filter",
    "phi_divisibility",
    "generation_certificate",
]


class TableIntegrityError(ValueError):
    """A structure constant failed to be a non-negative rational integer."""


@dataclass(frozen=True)
class ClassInfo:
    name: str
    element_order: int
    centralizer_order: int


@dataclass(frozen=True)
class CharacterTable:
    """Immutable character-table data.

    ``inverse_map`` holds 1-based class indices: entry k-1 names the class
    of inverses of elements in class k.
    """

    group_order: int
    classes: tuple[ClassInfo, ...]
    characters: tuple[tuple[CyclotomicNumber, ...], ...]
    inverse_map: tuple[int, ...]

    def n_classes(self) -> int:
        return len(self.classes)

    def class_size(self, k: int) -> int:
        """Size of class k (1-based): |G| / |centralizer|."""
        return self.group_order // self.classes[k - 1].centralizer_order

    def class_named(self, name: str) -> int:
        """1-based index of the class with the given name."""
        for k, cls in enumerate(self.classes, 1):
            if cls.name == name:
                return k
        raise KeyError(f"no class named {name!r}")


def _derive_inverse_map(classes, characters) -> tuple[int, ...]:
    """Match each class column against the conjugated columns.

    Valid tables have pairwise distinct columns (second orthogonality), so
    the match is unique; ambiguity means the data cannot be trusted and
    explicit inverse data is required.
    """
    m = len(classes)
    columns = [tuple(row[k] for row in characters) for k in range(m)]
    out = []
    for k in range(m):
        want = tuple(v.conjugate() for v in columns[k])
        hits = [l for l in range(m)
                if columns[l] == want
                and classes[l].element_order == classes[k].element_order]
        if len(hits) != 1:
            raise ValueError(
                f"inverse class of {classes[k].name} is ambiguous "
                f"({len(hits)} matching columns); supply inverse_map explicitly")
        out.append(hits[0] + 1)
    return tuple(out)


def _as_value(v) -> CyclotomicNumber:
    if isinstance(v, CyclotomicNumber):
        return v
    return from_rational(v)


def make_table(group_order: int, classes, characters,
               inverse_map=None) -> CharacterTable:
    """Assemble a CharacterTable; derives the inverse map when not given.

    Accepts plain ints/Fractions among the character values and any
    iterable shapes; performs only structural normalization — run
    ``validate`` to certify the table.
    """
    cls = tuple(ClassInfo(c.name, c.element_order, c.centralizer_order)
                if isinstance(c, ClassInfo) else ClassInfo(*c)
                for c in classes)
    chars = tuple(tuple(_as_value(v) for v in row) for row in characters)
    if any(len(row) != len(cls) for row in chars):
        raise ValueError("every character row must have one value per class")
    if inverse_map is None:
        inv = _derive_inverse_map(cls, chars)
    else:
        inv = tuple(int(k) for k in inverse_map)
    return CharacterTable(int(group_order), cls, chars, inv)


# ---------------------------------------------------------------------------
# Validation.
# ---------------------------------------------------------------------------


@dataclass
class ValidationReport:
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def __str__(self) -> str:
        if self.ok:
            return "table valid"
        return "\n".join(self.failures)


def validate(table: CharacterTable) -> ValidationReport:
    """Exact-arithmetic certification of an ingested character table.

    Checks class sizes, the identity class, degree sum of squares, the
    inverse map, and full row and column orthogonality; every failed
    identity is reported with its indices.
    """
    rep = ValidationReport()
    fail = rep.failures.append
    m = len(table.classes)
    order = table.group_order

    if order < 1:
        fail(f"group order {order} is not positive")
        return rep
    if m == 0:
        fail("table has no classes")
        return rep
    if len(table.characters) != m:
        fail(f"{len(table.characters)} characters for {m} classes "
             "(table must be square)")
        return rep

    sizes = []
    for k, cls in enumerate(table.classes, 1):
        if cls.centralizer_order < 1 or order % cls.centralizer_order:
            fail(f"centralizer order {cls.centralizer_order} of class {k} "
                 f"({cls.name}) does not divide the group order {order}")
            return rep
        sizes.append(order // cls.centralizer_order)
    if sum(sizes) != order:
        fail(f"class sizes sum to {sum(sizes)}, not the group order {order}")

    first = table.classes[0]
    if first.element_order != 1:
        fail(f"first class {first.name} has element order "
             f"{first.element_order}, not 1")
    if first.centralizer_order != order:
        fail(f"first class centralizer {first.centralizer_order} "
             f"differs from the group order {order}")
    degrees = []
    for i, row in enumerate(table.characters, 1):
        d = row[0].to_rational()
        if d is None or d.denominator != 1 or d <= 0:
            fail(f"character {i} has degree {row[0]} "
                 "(must be a positive rational integer)")
            degrees.append(None)
        else:
            degrees.append(int(d))
    if None not in degrees and sum(d * d for d in degrees) != order:
        fail(f"sum of squared degrees {sum(d * d for d in degrees)} "
             f"differs from the group order {order}")

    inv = table.inverse_map
    if sorted(inv) != list(range(1, m + 1)):
        fail(f"inverse_map {list(inv)} is not a permutation of 1..{m}")
    else:
        if inv[0] != 1:
            fail("inverse_map does not fix class 1")
        bad = [k for k in range(1, m + 1) if inv[inv[k - 1] - 1] != k]
        if bad:
            fail(f"inverse_map is not an involution at classes {bad}")
        for i, row in enumerate(table.characters, 1):
            for k in range(1, m + 1):
                if row[inv[k - 1] - 1] != row[k - 1].conjugate():
                    fail(f"character {i} at class {k} is inconsistent with "
                         f"the inverse map (conjugate mismatch)")

    for k in range(m):
        for l in range(k, m):
            total = from_rational(0)
            for row in table.characters:
                total = total + row[k] * row[l].conjugate()
            want = from_rational(order // sizes[k] if k == l else 0)
            if total != want:
                fail(f"column orthogonality fails at classes "
                     f"({k + 1}, {l + 1}): got {total}, want {want}")

    for i in range(m):
        for j in range(i, m):
            total = from_rational(0)
            for k in range(m):
                total = total + (sizes[k] *
                                 (table.characters[i][k] *
                                  table.characters[j][k].conjugate()))
            want = from_rational(order if i == j else 0)
            if total != want:
                fail(f"row orthogonality fails at characters "
                     f"({i + 1}, {j + 1}): got {total}, want {want}")

    return rep


# ---------------------------------------------------------------------------
# Class multiplication coefficients.
# ---------------------------------------------------------------------------


def _check_index(table: CharacterTable, k: int, what: str) -> None:
    if not 1 <= k <= len(table.classes):
        raise ValueError(f"{what} index {k} out of range 1..{len(table.classes)}")


def cmc(table: CharacterTable, i: int, j: int, k: int) -> int:
    """Number of pairs (x, y) with x in class i, y in class j and xy a
    fixed element of class k, from the standard structure-constant sum
    (|C_i||C_j|/|G|) * sum over characters of X(i)X(j)conj(X(k))/X(1).
    """
    for idx, what in ((i, "class i"), (j, "class j"), (k, "class k")):
        _check_index(table, idx, what)
    total = from_rational(0)
    for row in table.characters:
        deg = row[0].to_rational()
        if deg is None or deg == 0:
            raise TableIntegrityError("character degree is not a nonzero rational")
        term = row[i - 1] * row[j - 1] * row[k - 1].conjugate()
        total = total + term * (Fraction(1) / deg)
    scale = Fraction(table.class_size(i) * table.class_size(j),
                     table.group_order)
    value = total * scale
    q = value.to_rational()
    if q is None or q.denominator != 1 or q < 0:
        raise TableIntegrityError(
            f"structure constant ({i},{j},{k}) is {value}, "
            "not a non-negative rational integer; table data is corrupt")
    return int(q)


@dataclass(frozen=True)
class CmcScanReport:
    """cmc(i, j, k) for fixed i and k, across every middle class j."""

    i: int
    k: int
    values: tuple[int, ...]
    nonzero: tuple[bool, ...]

    def nonzero_classes(self) -> tuple[int, ...]:
        """1-based class indices j with cmc(i, j, k) > 0."""
        return tuple(j for j, flag in enumerate(self.nonzero, 1) if flag)


def cmc_scan(table: CharacterTable, i: int, k: int) -> CmcScanReport:
    """Evaluate cmc(i, j, k) for every class j."""
    _check_index(table, i, "class i")
    _check_index(table, k, "class k")
    values = tuple(cmc(table, i, j, k)
                   for j in range(1, len(table.classes) + 1))
    return CmcScanReport(i, k, values, tuple(v > 0 for v in values))


# ---------------------------------------------------------------------------
# Order filters.
# ---------------------------------------------------------------------------


def lagrange_filter(subgroup_orders, required_orders) -> list[str]:
    """Names of subgroups whose order every required order divides."""
    required = [int(r) for r in required_orders]
    out = []
    for name, order in subgroup_orders:
        order = int(order)
        if all(r != 0 and order % r == 0 for r in required):
            out.append(name)
    return out


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def phi_divisibility(p: int, q: int, N: int) -> set[int]:
    """All n <= N with p dividing the n-th cyclotomic polynomial at q.

    Exact big-integer evaluation; p must be prime, q >= 2, N <= 10**4.
    """
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    if q < 2:
        raise ValueError("q must be at least 2")
    if not 0 <= N <= 10**4:
        raise ValueError("N must lie in 0..10000")
    hits = set()
    for n in range(1, N + 1):
        acc = 0
        for c in reversed(cyclotomic_polynomial(n)):
            acc = acc * q + c
        if acc % p == 0:
            hits.add(n)
    return hits


# ---------------------------------------------------------------------------
# Overgroup-elimination certificate.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GenerationCertificate:
    """Facts assembled for the pair-with-witness generation argument.

    ``filter_survivors`` lists the subgroups whose order the witness
    element order divides; ``scans`` holds one CMC scan per supplied
    involution class against the witness class; ``covered_classes`` are the
    order-p classes j where every supplied involution class has a nonzero
    coefficient (empty when no involution classes were supplied).  The
    report states facts only — the group-theoretic conclusion lives in
    ``text``.
    """

    witness_class: int
    witness_order: int
    p: int
    filter_survivors: tuple[str, ...]
    scans: dict[int, CmcScanReport]
    order_p_classes: tuple[int, ...]
    covered_classes: tuple[int, ...]
    text: str


def generation_certificate(table: CharacterTable, involution_class_indices,
                           witness_class: int, subgroup_orders,
                           p: int) -> GenerationCertificate:
    """Assemble the order filter and CMC scans behind a generation claim.

    For each listed involution class i, scan cmc(i, j, witness_class) over
    all j; collect the order-p classes where every scanned coefficient is
    positive, and filter the supplied subgroup orders by divisibility by
    the witness element's order.
    """
    _check_index(table, witness_class, "witness class")
    invol = [int(i) for i in involution_class_indices]
    for i in invol:
        _check_index(table, i, "involution class")
    witness_order = table.classes[witness_class - 1].element_order
    survivors = tuple(lagrange_filter(subgroup_orders, [witness_order]))
    scans = {i: cmc_scan(table, i, witness_class) for i in invol}
    order_p = tuple(j for j, cls in enumerate(table.classes, 1)
                    if cls.element_order == p)
    if invol:
        covered = tuple(j for j in order_p
                        if all(scans[i].values[j - 1] > 0 for i in invol))
    else:
        covered = ()
    lines = [
        f"witness class {table.classes[witness_class - 1].name} "
        f"(element order {witness_order})",
        f"subgroups with order divisible by {witness_order}: "
        + (", ".join(survivors) if survivors else "none"),
    ]
    for i in invol:
        zero_at = [table.classes[j - 1].name
                   for j in range(1, len(table.classes) + 1)
                   if not scans[i].nonzero[j - 1]]
        lines.append(
            f"scan from class {table.classes[i - 1].name}: zero exactly at "
            + (", ".join(zero_at) if zero_at else "no class"))
    if invol:
        lines.append(
            f"order-{p} classes covered by every listed involution class: "
            + (", ".join(table.classes[j - 1].name for j in covered)
               if covered else "none"))
        lines.append(
            "a pair from a covered class and any listed involution class "
            "multiplies onto the witness class; any subgroup containing "
            "such a pair must survive the order filter above")
    else:
        lines.append("no involution classes supplied; scan section empty")
    return GenerationCertificate(
        witness_class=witness_class,
        witness_order=witness_order,
        p=p,
        filter_survivors=survivors,
        scans=scans,
        order_p_classes=order_p,
        covered_classes=covered,
        text="\n".join(lines),
    )
