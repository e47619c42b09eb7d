"""Straight-line word programs over a pair of standard generators.

Programs are semicolon-separated statements in a small Magma-like subset:
register assignments ``wK := wI * wJ^n;``, generator seeds ``wK := x;`` /
``wK := y;``, and the subgroup emission ``Append(~max, sub<G|wA,wB>);``.
Whitespace and line breaks carry no meaning.  Anything else (structural
commands like Normalizer or SylowSubgroup, foreign variable names) is a
parse error in strict mode and a reported skip in lenient mode.

Registers w1 and w2 are implicitly seeded with the two generators, so
programs may read them without assigning first; re-seeding mid-program is
an ordinary assignment.  Emissions capture register values at the point
the statement executes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .perm import Permutation, compose, power

__all__ = [
    "Seed",
    "Assign",
    "Emit",
    "WordProgram",
    "ParseReport",
    "WordProgramError",
    "parse_program",
    "parse_program_lenient",
    "evaluate",
    "pretty",
]

_MAX_EXPONENT = 2**63 - 1


class WordProgramError(ValueError):
    """Parse or evaluation failure; the message names the source line."""


@dataclass(frozen=True)
class Seed:
    """Assignment of a standard generator: ``wK := x;`` or ``wK := y;``."""

    target: int
    source: str
    line: int = field(compare=False)


@dataclass(frozen=True)
class Assign:
    """Register product: ``wK := wI^a * wJ^b * ...;`` (exponents optional)."""

    target: int
    factors: tuple[tuple[int, int], ...]
    line: int = field(compare=False)


@dataclass(frozen=True)
class Emit:
    """Subgroup emission ``Append(~max, sub<G|wA,wB>);`` of two registers."""

    registers: tuple[int, int]
    line: int = field(compare=False)


@dataclass(frozen=True)
class WordProgram:
    """Parsed statement sequence, in source order."""

    statements: tuple

    @property
    def instructions(self) -> tuple:
        """The register-writing statements (seeds and products)."""
        return tuple(s for s in self.statements if not isinstance(s, Emit))

    @property
    def emissions(self) -> tuple[tuple[int, int], ...]:
        return tuple(s.registers for s in self.statements
                     if isinstance(s, Emit))

    @property
    def source_line_map(self) -> tuple[int, ...]:
        return tuple(s.line for s in self.statements)

    def registers_used(self) -> frozenset[int]:
        regs = set()
        for s in self.statements:
            if isinstance(s, Emit):
                regs.update(s.registers)
            else:
                regs.add(s.target)
                if isinstance(s, Assign):
                    regs.update(r for r, _ in s.factors)
        return frozenset(regs)


@dataclass(frozen=True)
class ParseReport:
    """Lenient parse outcome: the program plus what was skipped."""

    program: WordProgram
    skipped: tuple[tuple[int, str], ...]


_SEED = re.compile(r"^w(\d+)\s*:=\s*([xy])$")
_ASSIGN = re.compile(r"^w(\d+)\s*:=\s*(.+)$", re.S)
_FACTOR = re.compile(r"^w(\d+)\s*(?:\^\s*(-?\s*\d+)\s*)?$")
_EMIT = re.compile(
    r"^Append\s*\(\s*~\s*max\s*,\s*sub\s*<\s*G\s*\|\s*w(\d+)\s*,\s*w(\d+)"
    r"\s*>\s*\)$")


def _statements_with_lines(text: str):
    """Split on semicolons, pairing each chunk with its starting line."""
    pos = 0
    for chunk in text.split(";"):
        stripped = chunk.strip()
        if stripped:
            at = pos + chunk.index(stripped[0])
            yield text.count("\n", 0, at) + 1, stripped
        pos += len(chunk) + 1


def _parse_statement(line: int, body: str):
    """One statement, or None when the statement is unsupported."""
    m = _EMIT.match(body)
    if m:
        return Emit((int(m.group(1)), int(m.group(2))), line)
    m = _SEED.match(body)
    if m:
        return Seed(int(m.group(1)), m.group(2), line)
    m = _ASSIGN.match(body)
    if not m:
        return None
    target = int(m.group(1))
    factors = []
    for part in m.group(2).split("*"):
        fm = _FACTOR.match(part.strip())
        if not fm:
            return None
        exponent = int(fm.group(2).replace(" ", "")) if fm.group(2) else 1
        if abs(exponent) > _MAX_EXPONENT:
            raise WordProgramError(
                f"line {line}: exponent {exponent} exceeds 63 bits")
        factors.append((int(fm.group(1)), exponent))
    return Assign(target, tuple(factors), line)


def _check_register_flow(statements) -> None:
    written = {1, 2}
    for s in statements:
        if isinstance(s, Emit):
            reads = s.registers
        elif isinstance(s, Assign):
            reads = [r for r, _ in s.factors]
        else:
            reads = []
        for r in reads:
            if r not in written:
                raise WordProgramError(
                    f"line {s.line}: register w{r} read before assignment")
        if not isinstance(s, Emit):
            written.add(s.target)


def _parse(text: str, strict: bool):
    statements = []
    skipped = []
    for line, body in _statements_with_lines(text):
        stmt = _parse_statement(line, body)
        if stmt is None:
            if strict:
                raise WordProgramError(
                    f"line {line}: unsupported statement: {body!r}")
            skipped.append((line, body))
        else:
            statements.append(stmt)
    _check_register_flow(statements)
    return WordProgram(tuple(statements)), tuple(skipped)


def parse_program(text: str) -> WordProgram:
    """Strict parse: any unsupported statement is an error naming its line."""
    program, _ = _parse(text, strict=True)
    return program


def parse_program_lenient(text: str) -> ParseReport:
    """Parse skipping unsupported statements; reports what was skipped."""
    program, skipped = _parse(text, strict=False)
    return ParseReport(program, skipped)


def evaluate(program: WordProgram, x: Permutation,
             y: Permutation) -> list[tuple[Permutation, Permutation]]:
    """Run the program on generators (x, y); one pair per emission."""
    if x.degree != y.degree:
        raise ValueError(f"degree mismatch: {x.degree} != {y.degree}")
    registers = {1: x, 2: y}
    out = []
    for s in program.statements:
        if isinstance(s, Seed):
            registers[s.target] = x if s.source == "x" else y
        elif isinstance(s, Assign):
            value = None
            for r, exponent in s.factors:
                term = (registers[r] if exponent == 1
                        else power(registers[r], exponent))
                value = term if value is None else compose(value, term)
            registers[s.target] = value
        else:
            out.append((registers[s.registers[0]], registers[s.registers[1]]))
    return out


def pretty(program: WordProgram) -> str:
    """Canonical one-statement-per-line rendering; reparses to the same
    statement sequence."""
    lines = []
    for s in program.statements:
        if isinstance(s, Seed):
            lines.append(f"w{s.target}:={s.source};")
        elif isinstance(s, Assign):
            text = "*".join(
                f"w{r}" if e == 1 else f"w{r}^{e}" for r, e in s.factors)
            lines.append(f"w{s.target}:={text};")
        else:
            a, b = s.registers
            lines.append(f"Append(~max,sub<G|w{a},w{b}>);")
    return "\n".join(lines) + ("\n" if lines else "")
