"""Word-program parsing, evaluation, and the bundled corpus."""

import pytest

from pairgen.io import data_path, load_perm_file
from pairgen.perm import (
    Permutation,
    build_chain,
    compose,
    contains,
    inverse,
)
from pairgen.wordprog import (
    Assign,
    Emit,
    ParseReport,
    Seed,
    WordProgramError,
    evaluate,
    parse_program,
    parse_program_lenient,
    pretty,
)

CORPUS = ["co1", "fi23", "hn", "j4", "ly", "m11_l2_11", "on", "th"]


def corpus_text(name):
    return data_path("wordprog", f"{name}.w").read_text()


def perm(*cycles, degree):
    return Permutation.from_cycles(cycles, degree)


# -- parsing -----------------------------------------------------------------------

def test_parse_basic_block():
    program = parse_program("w1:=x; w2:=y; w3:=w1*w2;")
    assert len(program.instructions) == 3
    assert program.emissions == ()
    assert program.statements[0] == Seed(1, "x", 1)
    assert program.statements[2] == Assign(3, ((1, 1), (2, 1)), 1)


def test_parse_exponents():
    program = parse_program(
        "w4:=w1; w5:=w4^22; w6:=w4^-1; w7:=w4^ -1; w8:=w4^0;")
    factors = [s.factors for s in program.statements[1:]]
    assert factors == [((4, 22),), ((4, -1),), ((4, -1),), ((4, 0),)]


def test_exponent_bit_limit():
    parse_program(f"w3:=w1^{2**63 - 1};")
    with pytest.raises(WordProgramError, match="line 1.*63 bits"):
        parse_program(f"w3:=w1^{2**63};")
    with pytest.raises(WordProgramError, match="63 bits"):
        parse_program(f"w3:=w1^-{2**63};")


def test_whitespace_and_line_breaks_are_insignificant():
    program = parse_program("w3 :=\n  w1 *\n  w2 ^ 3 ;")
    assert program.statements == (Assign(3, ((1, 1), (2, 3)), 1),)


def test_unsupported_statement_names_the_line():
    text = "w3:=w1*w2;\nw4:=w3*w3;\nH8:=Normalizer(G,V);\n"
    with pytest.raises(WordProgramError, match="line 3.*Normalizer"):
        parse_program(text)
    report = parse_program_lenient(text)
    assert isinstance(report, ParseReport)
    assert len(report.program.statements) == 2
    assert report.skipped == ((3, "H8:=Normalizer(G,V)"),)


@pytest.mark.parametrize("bad", [
    "w3:=x*w2;",
    "for i in [1..9] do w3:=w1; end for;",
    "S:=SylowSubgroup(G,2);",
    "delete w3;",
    "Append(~max,sub<G|w1,w2,w3>);",
    "Append(~other,sub<G|w1,w2>);",
    "Append(~max,sub<H|w1,w2>);",
])
def test_only_the_exact_statement_shapes_parse(bad):
    with pytest.raises(WordProgramError, match="unsupported"):
        parse_program(bad)


def test_emission_shape_tolerates_spacing():
    program = parse_program("Append( ~max , sub< G | w1 , w2 > );")
    assert program.statements == (Emit((1, 2), 1),)


def test_read_before_write_is_an_error():
    with pytest.raises(WordProgramError, match="line 1.*w4 read"):
        parse_program("w3:=w4*w1;")
    with pytest.raises(WordProgramError, match="w9 read"):
        parse_program("Append(~max,sub<G|w1,w9>);")


def test_seed_registers_are_implicitly_written():
    program = parse_program("w3:=w1*w2;")
    assert program.statements == (Assign(3, ((1, 1), (2, 1)), 1),)


def test_reseeding_is_an_ordinary_assignment():
    program = parse_program("w1:=x; Append(~max,sub<G|w1,w2>); w1:=y;")
    assert [type(s) for s in program.statements] == [Seed, Emit, Seed]


# -- evaluation ---------------------------------------------------------------------

def test_evaluate_spec_example():
    program = parse_program("w3:=w1*w2; Append(~max,sub<G|w1,w3>);")
    x = perm((0, 1), degree=3)
    y = perm((1, 2), degree=3)
    [(a, b)] = evaluate(program, x, y)
    assert a == x
    assert b == perm((0, 2, 1), degree=3)


def test_evaluate_inverse():
    program = parse_program(
        "w3:=w1*w2; w4:=w3^-1; Append(~max,sub<G|w4,w3>);")
    x = perm((0, 1, 2, 3), degree=5)
    y = perm((2, 3, 4), degree=5)
    [(a, b)] = evaluate(program, x, y)
    assert b == compose(x, y)
    assert a == inverse(compose(x, y))


def test_evaluate_tracks_reseeding():
    program = parse_program(
        "Append(~max,sub<G|w1,w2>); w1:=y; Append(~max,sub<G|w1,w2>);")
    x = perm((0, 1), degree=3)
    y = perm((0, 1, 2), degree=3)
    first, second = evaluate(program, x, y)
    assert first == (x, y)
    assert second == (y, y)


def test_evaluate_degree_mismatch():
    program = parse_program("w3:=w1*w2;")
    with pytest.raises(ValueError, match="degree mismatch"):
        evaluate(program, perm((0, 1), degree=3), perm((0, 1), degree=4))


def test_evaluation_commutes_with_conjugation():
    text = corpus_text("m11_l2_11")
    program = parse_program(text)
    gens = load_perm_file(data_path("perms", "m11.perm"))
    x, y = gens[0], gens[1]
    g = compose(x, compose(y, x))
    xg = compose(inverse(g), compose(x, g))
    yg = compose(inverse(g), compose(y, g))
    plain = evaluate(program, x, y)
    moved = evaluate(program, xg, yg)
    for (a, b), (am, bm) in zip(plain, moved):
        assert am == compose(inverse(g), compose(a, g))
        assert bm == compose(inverse(g), compose(b, g))


# -- pretty-printing ----------------------------------------------------------------

def test_pretty_round_trip_handmade():
    text = "w1:=x; w3:=w1^-2*w2; Append(~max,sub<G|w3,w2>); w3:=w3^5;"
    program = parse_program(text)
    assert parse_program(pretty(program)).statements == program.statements


@pytest.mark.parametrize("name", CORPUS)
def test_pretty_round_trip_corpus(name):
    program = parse_program(corpus_text(name))
    assert parse_program(pretty(program)).statements == program.statements


# -- corpus -------------------------------------------------------------------------

@pytest.mark.parametrize("name", CORPUS)
def test_corpus_parses_strictly(name):
    program = parse_program(corpus_text(name))
    assert len(program.statements) > 0
    assert len(program.registers_used()) <= 64


def test_on_corpus_first_emission():
    program = parse_program(corpus_text("on"))
    assert program.emissions[0] == (1, 2)


def test_corpus_instruction_and_emission_counts():
    on = parse_program(corpus_text("on"))
    assert len(on.emissions) >= 1
    m11 = parse_program(corpus_text("m11_l2_11"))
    assert m11.emissions == ((5, 6),)


def test_m11_word_program_builds_its_maximal_subgroup():
    program = parse_program(corpus_text("m11_l2_11"))
    gens = load_perm_file(data_path("perms", "m11.perm"))
    chain = build_chain(gens, seed=0)
    [(a, b)] = evaluate(program, gens[0], gens[1])
    assert contains(chain, a) and contains(chain, b)
    assert build_chain([a, b], seed=0).group_order == 660


@pytest.mark.parametrize("name", ["co1", "j4", "ly", "on", "th"])
def test_corpus_outputs_stay_inside_the_group(name):
    """Closure check: every emitted element is a word in the seeds."""
    program = parse_program(corpus_text(name))
    gens = load_perm_file(data_path("perms", "a5.perm"))
    chain = build_chain(gens, seed=0)
    for a, b in evaluate(program, gens[0], gens[1]):
        assert contains(chain, a)
        assert contains(chain, b)
