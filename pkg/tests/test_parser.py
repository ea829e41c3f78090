import pytest
from hypothesis import given, strategies as st

from ccsp.equivalence import GenConfig, gen_term
from ccsp.parser import ParseError, parse_compensable, parse_standard
from ccsp.terms import (
    SKIP,
    THROW,
    YIELD,
    Atom,
    Block,
    CChoice,
    CPar,
    CSeq,
    Choice,
    Interrupt,
    Pair,
    Par,
    Seq,
    pretty_print,
)

A = Atom("a")
B = Atom("b")
C = Atom("c")


def test_parse_keywords_and_sequence():
    assert parse_standard("SKIP ; THROW") is Seq(SKIP, THROW)
    assert parse_standard("YIELD") is YIELD


def test_parse_block_with_desugared_alias():
    term = parse_standard("[ a % b ; THROWW ]")
    assert term is Block(CSeq(Pair(A, B), Pair(THROW, SKIP)))


def test_parse_precedence_choice_vs_seq():
    assert parse_standard("a [] b ; c") is Choice(A, Seq(B, C))


@pytest.mark.parametrize(
    "text,expected",
    [
        ("a ; b || SKIP", Par(Seq(A, B), SKIP)),
        ("a |> b [] c", Choice(Interrupt(A, B), C)),
        ("a ; b |> c", Interrupt(Seq(A, B), C)),
        ("a [] b || c", Par(Choice(A, B), C)),
        ("a ; b ; c", Seq(Seq(A, B), C)),
        ("(a ; b) ; c", Seq(Seq(A, B), C)),
        ("a ; (b ; c)", Seq(A, Seq(B, C))),
    ],
)
def test_parse_standard_precedence_table(text, expected):
    assert parse_standard(text) is expected


def test_parse_compensable_pair():
    assert parse_compensable("a % b") is Pair(A, B)


def test_parse_compensable_aliases():
    assert parse_compensable("SKIPP") is Pair(SKIP, SKIP)
    assert parse_compensable("YIELDD") is Pair(YIELD, SKIP)
    assert parse_compensable("THROWW") is Pair(THROW, SKIP)


def test_parse_compensable_sequence_of_pairs():
    term = parse_compensable("(a % a') ; (b % b')")
    assert term is CSeq(Pair(A, Atom("a'")), Pair(B, Atom("b'")))


@pytest.mark.parametrize(
    "text,expected",
    [
        ("a % b ; c % d", CSeq(Pair(A, B), Pair(C, Atom("d")))),
        ("a % b [] c % d", CChoice(Pair(A, B), Pair(C, Atom("d")))),
        ("a % b || c % d", CPar(Pair(A, B), Pair(C, Atom("d")))),
        ("(a ; b) % SKIP", Pair(Seq(A, B), SKIP)),
        ("[ a % b ] % SKIP", Pair(Block(Pair(A, B)), SKIP)),
        ("((a % b))", Pair(A, B)),
    ],
)
def test_parse_compensable_forms(text, expected):
    assert parse_compensable(text) is expected


def test_blocks_nest():
    term = parse_standard("[ [ a % b ] % SKIP ]")
    assert term is Block(Pair(Block(Pair(A, B)), SKIP))


@pytest.mark.parametrize(
    "text,offset",
    [
        ("0", 0),  # the null process is not part of the syntax
        ("a ;", 3),  # missing operand
        ("a ; ; b", 4),
        ("(a ; b", 6),  # unclosed paren
        ("a $ b", 2),  # unknown operator
        ("a [] [] b", 5),
        ("SKIPP", 0),  # compensable-only keyword in standard position
    ],
)
def test_parse_errors_point_at_first_offending_lexeme(text, offset):
    with pytest.raises(ParseError) as exc:
        parse_standard(text)
    assert exc.value.position == offset


def test_compensable_construct_rejected_in_standard_position():
    with pytest.raises(ParseError) as exc:
        parse_standard("a % b")
    assert exc.value.position == 2


def test_standard_construct_rejected_in_compensable_position():
    with pytest.raises(ParseError):
        parse_compensable("a ; b")
    with pytest.raises(ParseError):
        parse_compensable("SKIP")


def test_trailing_garbage_rejected():
    with pytest.raises(ParseError) as exc:
        parse_standard("a b")
    assert exc.value.position == 2


def test_whitespace_insensitive():
    assert parse_standard("a;b||c") is parse_standard(" a ;  b ||\tc ")


@given(
    st.integers(0, 2**63 - 1),
    st.integers(1, 5),
    st.sampled_from(["standard", "compensable"]),
)
def test_parse_inverts_pretty_print(seed, depth, kind):
    cfg = GenConfig(seed=seed, max_depth=depth, alphabet=("a", "b", "c"), kind=kind)
    term = gen_term(cfg)
    parse = parse_standard if kind == "standard" else parse_compensable
    assert parse(pretty_print(term)) is term
