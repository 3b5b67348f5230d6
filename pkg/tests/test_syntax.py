from fractions import Fraction

import pytest

from probgkat.errors import AlphabetError, AtomLimitError, ParseError
from probgkat.syntax import (
    ONE,
    ZERO,
    Act,
    Alphabet,
    And,
    GuardedChoice,
    GuardedLoop,
    Not,
    One,
    Or,
    Prim,
    ProbChoice,
    ProbLoop,
    Return,
    Seq,
    Test,
    bool_equiv,
    entails,
    enumerate_atoms,
    is_gkat,
    parse_expr,
    parse_program,
    parse_test,
    print_expr,
    print_program,
)

from .generators import ALPHABET, random_expr, random_test

p, q = Act("p"), Act("q")
t, u = Prim("t"), Prim("u")


def test_header_and_sequence() -> None:
    alphabet, e = parse_program("tests t; actions p, q; outputs v;\np ; q ; ret v")
    assert alphabet == Alphabet(("t",), ("p", "q"), ("v",))
    assert e == Seq(p, Seq(q, Return("v")))


def test_precedence() -> None:
    e = parse_expr("p ; q +[t] p +{1/2} q *{1/3}", ALPHABET)
    assert e == ProbChoice(GuardedChoice(Seq(p, q), t, p), Fraction(1, 2), ProbLoop(q, Fraction(1, 3)))


def test_choices_nest_to_the_right() -> None:
    assert parse_expr("p +{1/2} q +{1/3} p", ALPHABET) == ProbChoice(
        p, Fraction(1, 2), ProbChoice(q, Fraction(1, 3), p)
    )
    assert parse_expr("p +[t] q +[u] p", ALPHABET) == GuardedChoice(p, t, GuardedChoice(q, u, p))


def test_tests_in_expressions() -> None:
    assert parse_expr("[t & ~u]", ALPHABET) == Test(And(t, Not(u)))
    assert parse_expr("t", ALPHABET) == Test(t)
    assert parse_expr("0", ALPHABET) == ZERO
    assert parse_expr("1", ALPHABET) == ONE
    assert parse_test("t | u & ~t", ALPHABET) == Or(t, And(u, Not(t)))


def test_loops_and_decimals() -> None:
    assert parse_expr("p *[t] *{0.25}", ALPHABET) == ProbLoop(GuardedLoop(p, t), Fraction(1, 4))


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("r", "undeclared"),
        ("ret p", "expected a output"),
        ("v", "ret v"),
        ("p +{3/2} q", "outside [0,1]"),
        ("p +{1/0} q", "zero denominator"),
        ("p ;", "expected identifier"),
        ("(p", "expected ')'"),
        ("p q", "unexpected"),
    ],
)
def test_parse_errors(text: str, fragment: str) -> None:
    with pytest.raises(ParseError, match=fragment.replace("[", r"\[").replace("(", r"\(").replace(")", r"\)")):
        parse_expr(text, ALPHABET)


def test_parse_error_position() -> None:
    with pytest.raises(ParseError) as info:
        parse_program("actions p;\n  r")
    assert (info.value.line, info.value.column) == (2, 3)


def test_header_clash_is_a_parse_error() -> None:
    with pytest.raises(ParseError, match="declared as both"):
        parse_program("tests t; actions t; t")


def test_alphabet_rejects_duplicates_and_keywords() -> None:
    with pytest.raises(AlphabetError):
        Alphabet(actions=("p", "p"))
    with pytest.raises(AlphabetError):
        Alphabet(outputs=("ret",))


def test_print_round_trip(rng) -> None:
    for _ in range(200):
        e = random_expr(rng, ALPHABET, depth=4)
        assert parse_expr(print_expr(e), ALPHABET) == e


def test_print_program_round_trip() -> None:
    alphabet, e = parse_program("tests t; actions p; (p ; p) *[t] +[~t] 1")
    assert parse_program(print_program(alphabet, e)) == (alphabet, e)


def test_atoms_order_and_tests() -> None:
    atoms = enumerate_atoms(ALPHABET)
    assert [a.label() for a in atoms] == ["", "u", "t", "t,u"]
    assert atoms[2].as_test() == And(t, Not(u))
    assert ALPHABET.atom_index(ALPHABET.parse_atom("t")) == 2
    assert enumerate_atoms(Alphabet())[0].as_test() == One()


def test_atom_limit() -> None:
    with pytest.raises(AtomLimitError):
        enumerate_atoms(ALPHABET, max_tests=1)


def test_unknown_atom_literal() -> None:
    with pytest.raises(AlphabetError):
        ALPHABET.parse_atom("t,z")


def test_bool_equiv() -> None:
    assert bool_equiv(Not(And(t, u)), Or(Not(t), Not(u)))
    assert bool_equiv(Or(t, Not(t)), One())
    assert not bool_equiv(t, u)


def test_gkat_fragment() -> None:
    assert is_gkat(GuardedLoop(Seq(p, q), t))
    assert not is_gkat(ProbChoice(p, Fraction(1, 2), q))
    assert not is_gkat(Return("v"))


def test_each_atom_decides_each_test(rng) -> None:
    atoms = enumerate_atoms(ALPHABET)
    for _ in range(200):
        b = random_test(rng)
        for atom in atoms:
            assert entails(atom, b) != entails(atom, Not(b))


def test_bool_equiv_is_an_equivalence(rng) -> None:
    for _ in range(200):
        b, c, d = (random_test(rng, depth=1) for _ in range(3))
        assert bool_equiv(b, b, ALPHABET)
        assert bool_equiv(b, Not(Not(b)), ALPHABET) and bool_equiv(And(b, b), b, ALPHABET)
        assert bool_equiv(b, c, ALPHABET) == bool_equiv(c, b, ALPHABET)
        if bool_equiv(b, c, ALPHABET) and bool_equiv(c, d, ALPHABET):
            assert bool_equiv(b, d, ALPHABET)


def test_long_chains_parse_without_recursion() -> None:
    n = 3000
    _, e = parse_program("actions p;\n" + " ; ".join(["p"] * n))
    depth = 0
    while isinstance(e, Seq):
        assert e.left == p
        e, depth = e.right, depth + 1
    assert depth == n - 1
    _, e = parse_program("actions p;\n" + " +{1/2} ".join(["p"] * n))
    assert isinstance(e, ProbChoice) and isinstance(e.right, ProbChoice)
