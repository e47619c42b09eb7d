"""File formats, bundled data access, and report emission.

Permutation files are plain text: a header line ``<degree> <count>``
followed by ``count`` rows of ``degree`` space-separated 1-based images.
Group bundles, maximal-subgroup records, class data, and character tables
are JSON; group orders and other potentially huge counts are accepted as
decimal strings (and written back as such).  All on-disk points are
1-based; the in-memory API stays 0-based.

Relative paths inside a JSON document resolve against that document's own
directory, so bundles can point at sibling fixture files no matter where
the caller runs from.
"""

from __future__ import annotations

import csv
import io as _stringio
import json
import os
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .census import ConjugacyClassData, OrderCensus
from .chartab import CharacterTable, make_table, validate
from .cyclo import parse_cyclotomic
from .maxbound import MaximalSubgroupRecord
from .perm import MAX_DEGREE, Permutation, StabilizerChain, build_chain
from .wordprog import parse_program

__all__ = [
    "load_perm_file",
    "save_perm_file",
    "data_path",
    "decimal5",
    "GroupBundle",
    "load_bundle",
    "load_character_table",
    "load_class_data",
    "load_maximal_records",
    "ReportRow",
    "ReportTable",
]


def decimal5(value) -> str:
    """Exact 5-place decimal string, rounding halves away from zero."""
    q = Fraction(value)
    sign = "-" if q < 0 else ""
    scaled = abs(q) * 100000
    units = scaled.numerator // scaled.denominator
    if 2 * (scaled - units) >= 1:
        units += 1
    return f"{sign}{units // 100000}.{units % 100000:05d}"


# ---------------------------------------------------------------------------
# Permutation files.
# ---------------------------------------------------------------------------

def load_perm_file(path) -> list[Permutation]:
    """Read a permutation list from a ``<degree> <count>`` headed text file."""
    path = Path(path)
    with open(path, "r", encoding="ascii") as fh:
        lines = fh.read().splitlines()
    rows = [(no, line.split()) for no, line in enumerate(lines, 1)
            if line.strip()]
    if not rows or rows[0][0] != 1:
        raise ValueError(f"{path}: missing '<degree> <count>' header on line 1")
    _, header = rows[0]
    try:
        degree, count = map(int, header)
    except ValueError:
        raise ValueError(
            f"{path}: malformed '<degree> <count>' header") from None
    if degree < 1 or degree > MAX_DEGREE:
        raise ValueError(f"{path}: degree {degree} outside 1..{MAX_DEGREE}")
    if count < 0:
        raise ValueError(f"{path}: negative permutation count")
    body = rows[1:]
    if len(body) != count:
        raise ValueError(
            f"{path}: expected {count} permutation rows, found {len(body)}")
    perms = []
    for no, tokens in body:
        if len(tokens) != degree:
            raise ValueError(
                f"{path}: expected {degree} images at line {no}, "
                f"found {len(tokens)}")
        try:
            images = [int(t) - 1 for t in tokens]
        except ValueError:
            raise ValueError(
                f"{path}: non-integer image at line {no}") from None
        try:
            perms.append(Permutation(images))
        except ValueError:
            raise ValueError(f"{path}: not a bijection at line {no}") from None
    return perms


def save_perm_file(path, perms: list[Permutation]) -> None:
    """Write permutations in the 1-based ``<degree> <count>`` text format."""
    if not perms:
        raise ValueError("refusing to write an empty permutation file")
    degree = perms[0].degree
    if any(p.degree != degree for p in perms):
        raise ValueError("permutations must share a common degree")
    path = Path(path)
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{degree} {len(perms)}\n")
        for p in perms:
            fh.write(" ".join(str(c + 1) for c in p.images.tolist()) + "\n")


def data_path(*parts: str) -> Path:
    """Path inside the bundled data directory (PAIRGEN_DATA overrides)."""
    override = os.environ.get("PAIRGEN_DATA")
    if override:
        return Path(override).joinpath(*parts)
    return Path(__file__).parent.joinpath("data", *parts)


# ---------------------------------------------------------------------------
# JSON plumbing shared by the loaders.
# ---------------------------------------------------------------------------

def _read_json(path: Path):
    text = path.read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(
            f"{path}: invalid JSON at byte {exc.pos}: {exc.msg}") from None


def _as_count(value) -> int:
    """Exact integer from an int or a decimal-string field."""
    return int(str(value))


def _need(doc: dict, key: str, path: Path):
    if key not in doc:
        raise ValueError(f"{path}: missing key {key!r}")
    return doc[key]


def _resolve(base: Path, ref: str) -> Path:
    p = Path(ref)
    return p if p.is_absolute() else base / p


# ---------------------------------------------------------------------------
# Character tables.
# ---------------------------------------------------------------------------

def load_character_table(path) -> CharacterTable:
    """Read and certify a character table from its JSON form.

    Expected keys: ``group_order`` (decimal string), ``classes`` (array of
    {name, element_order, centralizer_order}), ``characters`` (array of
    rows of cyclotomic strings), optional 1-based ``inverse_map`` (derived
    from the character values when absent).  The table must pass the full
    exact-arithmetic validation before it is returned.
    """
    path = Path(path)
    doc = _read_json(path)
    order = _as_count(_need(doc, "group_order", path))
    classes = []
    for pos, cls in enumerate(_need(doc, "classes", path), 1):
        for key in ("name", "element_order", "centralizer_order"):
            if key not in cls:
                raise ValueError(
                    f"{path}: class entry {pos} is missing {key!r}")
        classes.append((cls["name"], int(cls["element_order"]),
                        _as_count(cls["centralizer_order"])))
    characters = [
        [parse_cyclotomic(v) if isinstance(v, str) else v for v in row]
        for row in _need(doc, "characters", path)]
    table = make_table(order, classes, characters,
                       inverse_map=doc.get("inverse_map"))
    report = validate(table)
    if not report.ok:
        raise ValueError(f"{path}: character table failed validation: {report}")
    return table


# ---------------------------------------------------------------------------
# Class data (header lists of element order / centralizer order).
# ---------------------------------------------------------------------------

def load_class_data(path, key: str | None = None) -> ConjugacyClassData:
    """Read published class headers for one group.

    The file either holds a single record ({group_order, classes}) or a
    map from group keys to such records, in which case ``key`` picks one
    (it may be omitted when the map has a single entry).
    """
    path = Path(path)
    doc = _read_json(path)
    if "classes" in doc:
        if key is not None:
            raise ValueError(
                f"{path}: single-record file, but key {key!r} was given")
        record = doc
    elif key is None:
        if len(doc) != 1:
            raise ValueError(
                f"{path}: holds records for {', '.join(sorted(doc))}; "
                f"pass key= to pick one")
        record = next(iter(doc.values()))
    else:
        if key not in doc:
            raise ValueError(
                f"{path}: no record {key!r} (have {', '.join(sorted(doc))})")
        record = doc[key]
    order = _as_count(_need(record, "group_order", path))
    headers = []
    for pos, cls in enumerate(_need(record, "classes", path), 1):
        r = int(cls["element_order"])
        cent = _as_count(cls["centralizer_order"])
        if cent < 1 or order % cent:
            raise ValueError(
                f"{path}: class entry {pos}: centralizer order {cent} does "
                f"not divide the group order {order}")
        headers.append((r, cent))
    return ConjugacyClassData(order, tuple(headers))


# ---------------------------------------------------------------------------
# Maximal-subgroup record files.
# ---------------------------------------------------------------------------

def load_maximal_records(path) -> tuple[MaximalSubgroupRecord, ...]:
    """Read one record per conjugacy class of maximal subgroups.

    The file carries the parent's ``group_order`` plus ``records``, each
    with a name, the subgroup order, and exactly one data source:
    ``generators`` (rows of 1-based images), ``word_program`` (path to a
    program file, parsed here, with optional ``emission`` index), or
    ``census`` ({counts, complete?} with counts keyed by element order).
    """
    path = Path(path)
    doc = _read_json(path)
    group_order = _as_count(_need(doc, "group_order", path))
    records = []
    for pos, rec in enumerate(_need(doc, "records", path), 1):
        name = rec.get("name", f"record {pos}")
        order = _as_count(_need(rec, "order", path))
        if order < 1 or group_order % order:
            raise ValueError(
                f"{path}: record {name!r}: order {order} does not divide "
                f"the group order {group_order}")
        fields: dict = {}
        if "generators" in rec:
            fields["generators"] = tuple(
                Permutation([int(i) - 1 for i in row])
                for row in rec["generators"])
        if "word_program" in rec:
            text = _resolve(path.parent, rec["word_program"]).read_text()
            fields["word_program"] = parse_program(text)
            fields["emission"] = int(rec.get("emission", 0))
        if "census" in rec:
            cen = rec["census"]
            counts = {int(r): _as_count(c)
                      for r, c in _need(cen, "counts", path).items()}
            fields["census"] = OrderCensus(
                order, counts, complete=bool(cen.get("complete", True)))
        records.append(MaximalSubgroupRecord(
            name=name, order=order, index=group_order // order, **fields))
    return tuple(records)


# ---------------------------------------------------------------------------
# Group bundles.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GroupBundle:
    """A named group: generators plus whatever side data ships with it."""

    name: str
    generators: tuple[Permutation, ...]
    order: int | None = None
    class_data: ConjugacyClassData | None = None
    maximals: tuple[MaximalSubgroupRecord, ...] | None = None
    character_table_path: Path | None = None

    def __post_init__(self):
        if not self.generators:
            raise ValueError(f"bundle {self.name!r} has no generators")
        degree = self.generators[0].degree
        if any(g.degree != degree for g in self.generators):
            raise ValueError(
                f"bundle {self.name!r}: generator degrees disagree")

    def build(self, seed: int = 0) -> StabilizerChain:
        """Verified stabilizer chain; the declared order must match."""
        chain = build_chain(list(self.generators), seed=seed)
        if self.order is not None and chain.group_order != self.order:
            raise ValueError(
                f"bundle {self.name!r} declares order {self.order}, but the "
                f"generators produce a group of order {chain.group_order}")
        return chain

    def character_table(self) -> CharacterTable:
        if self.character_table_path is None:
            raise ValueError(f"bundle {self.name!r} has no character table")
        return load_character_table(self.character_table_path)


def load_bundle(source) -> GroupBundle:
    """Load a group bundle by name (bundled data) or by explicit path."""
    path = Path(source)
    if not path.exists():
        path = data_path("bundles", f"{source}.json")
    doc = _read_json(path)
    base = path.parent
    name = _need(doc, "name", path)
    generators = tuple(load_perm_file(
        _resolve(base, _need(doc, "perms", path))))
    order = _as_count(doc["order"]) if "order" in doc else None
    maximals = None
    if "maximals" in doc:
        maximals = load_maximal_records(_resolve(base, doc["maximals"]))
    class_data = None
    if "class_data" in doc:
        class_data = load_class_data(_resolve(base, doc["class_data"]),
                                     doc.get("class_data_key"))
    table_path = None
    if "character_table" in doc:
        table_path = _resolve(base, doc["character_table"])
    return GroupBundle(name=name, generators=generators, order=order,
                       class_data=class_data, maximals=maximals,
                       character_table_path=table_path)


# ---------------------------------------------------------------------------
# Report tables.
# ---------------------------------------------------------------------------

_REPORT_KINDS = ("exact", "bound", "n/a")


@dataclass(frozen=True)
class ReportRow:
    """One (group, p) cell: an exact value, a lower bound, or n/a."""

    group: str
    p: int
    value: Fraction | None
    decimal5: str
    kind: str

    def __post_init__(self):
        if self.kind not in _REPORT_KINDS:
            raise ValueError(f"row kind must be one of {_REPORT_KINDS}")
        if self.kind == "n/a":
            if self.value is not None or self.decimal5 != "n/a":
                raise ValueError("an n/a row carries no value")
        else:
            if self.value is None or self.decimal5 != decimal5(self.value):
                raise ValueError(
                    "decimal5 field must be the 5-place rendering of the "
                    "exact value")

    @classmethod
    def make(cls, group: str, p: int, value, kind: str = "exact"):
        if kind == "n/a":
            return cls(group, p, None, "n/a", kind)
        q = Fraction(value)
        return cls(group, p, q, decimal5(q), kind)


@dataclass(frozen=True)
class ReportTable:
    """Rows of (group, p) results with exact values and 5-place decimals.

    The CSV and JSON renderings carry the same fields; exact values are
    serialized as fraction strings so nothing is lost to rounding.
    """

    rows: tuple[ReportRow, ...]

    @staticmethod
    def _cell(row: ReportRow):
        return None if row.value is None else str(row.value)

    def to_json(self) -> str:
        doc = {"rows": [
            {"group": r.group, "p": r.p, "value": self._cell(r),
             "decimal5": r.decimal5, "kind": r.kind}
            for r in self.rows]}
        return json.dumps(doc, indent=2) + "\n"

    def to_csv(self) -> str:
        buf = _stringio.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["group", "p", "value", "decimal5", "kind"])
        for r in self.rows:
            writer.writerow([r.group, r.p, self._cell(r) or "",
                             r.decimal5, r.kind])
        return buf.getvalue()
