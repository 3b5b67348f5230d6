from fractions import Fraction

import pytest

from probgkat.errors import AlphabetError, InvariantViolation, ProbabilityError
from probgkat.prob import ACCEPT, REJECT, Dist, Ret, Step, dirac
from probgkat.semantics import (
    Automaton,
    StateTable,
    automaton_from_table,
    build_automata,
    build_automaton,
    is_homomorphism,
    merge_automata,
    reachable,
)
from probgkat.syntax import ONE, Act, Alphabet, ProbChoice, ProbLoop, Seq, enumerate_atoms

from .generators import ALPHABET, random_expr

p, q = Act("p"), Act("q")
half = Fraction(1, 2)
PQ = Alphabet(actions=("p", "q"))


def test_state_table_interns_structurally() -> None:
    table = StateTable()
    assert table.intern(Seq(p, q)) == (0, True)
    assert table.intern(Seq(Act("p"), Act("q"))) == (0, False)
    assert table.intern(ONE) == (1, True)
    assert len(table) == 2 and ONE in table


def test_build_from_derivatives() -> None:
    loop = ProbLoop(p, half)
    aut, root = build_automaton(loop, PQ)
    assert aut.descriptors == [loop, Seq(ONE, loop)]
    assert aut.dist(root, 0) == Dist({ACCEPT: half, Step("p", 1): half})
    assert aut.dist(1, 0) == aut.dist(0, 0)
    aut.validate()


def test_several_roots_share_states() -> None:
    aut, roots = build_automata([p, ProbChoice(p, half, q), p], PQ)
    assert roots == [0, 1, 0]
    assert aut.descriptors.count(ONE) == 1


def test_merge_shares_equal_descriptors() -> None:
    a1, _ = build_automaton(p, PQ)
    a2, _ = build_automaton(q, PQ)
    merged, remap1, remap2 = merge_automata(a1, a2)
    assert merged.n_states == 3
    assert remap1 == {0: 0, 1: 1}
    assert remap2 == {0: 2, 1: 1}
    assert merged.dist(2, 0) == dirac(Step("q", 1))


def test_merge_requires_equal_tests() -> None:
    a1, _ = build_automaton(p, Alphabet(tests=("t",), actions=("p",)))
    a2, _ = build_automaton(p, Alphabet(tests=("u",), actions=("p",)))
    with pytest.raises(AlphabetError):
        merge_automata(a1, a2)


def test_merge_reorders_atoms() -> None:
    tu = Alphabet(tests=("t", "u"), actions=("p",))
    ut = Alphabet(tests=("u", "t"), actions=("p",))
    a1, _ = build_automaton(ONE, tu)
    a2, _ = build_automaton(Seq(ONE, ONE), ut)
    a2.trans[0] = [dirac(ACCEPT) if atom["t"] else dirac(REJECT) for atom in a2.atoms]
    merged, _, remap2 = merge_automata(a1, a2)
    row = merged.trans[remap2[0]]
    assert [nu == dirac(ACCEPT) for nu in row] == [atom["t"] for atom in merged.atoms]


def test_reachable_subautomaton_embeds(rng) -> None:
    for _ in range(100):
        aut, _ = build_automaton(random_expr(rng, ALPHABET, depth=4), ALPHABET)
        x = rng.randrange(aut.n_states)
        sub, remap = reachable(aut, x)
        assert sub.descriptors[0] == aut.descriptors[x]
        inverse = {new: old for old, new in remap.items()}
        assert is_homomorphism(inverse, sub, aut)


def test_reachable_rejects_unknown_state() -> None:
    aut, _ = build_automaton(p, PQ)
    with pytest.raises(ValueError):
        reachable(aut, 5)


def test_non_homomorphism() -> None:
    aut, _ = build_automaton(Seq(p, q), PQ)
    assert not is_homomorphism({0: 0, 1: 0, 2: 2}, aut, aut)
    assert not is_homomorphism({0: 0}, aut, aut)
    assert not is_homomorphism({0: 0, 1: 1, 2: 9}, aut, aut)
    other, _ = build_automaton(Seq(p, q), Alphabet(tests=("t",), actions=("p", "q")))
    assert not is_homomorphism({x: x for x in aut.states()}, aut, other)


def test_from_table() -> None:
    alphabet = Alphabet(tests=("t",), actions=("p",), outputs=("v",))
    aut = automaton_from_table(
        alphabet,
        {
            "x": [{Ret("v"): half, Step("p", "y"): half}, {Step("p", "x"): Fraction(1)}],
            "y": [{ACCEPT: Fraction(1)}, {REJECT: Fraction(1)}],
        },
    )
    assert aut.descriptors == ["x", "y"]
    assert aut.dist(0, 0) == Dist({Ret("v"): half, Step("p", 1): half})
    assert aut.successors(0) == {0, 1}


@pytest.mark.parametrize(
    "row, error",
    [
        ([{ACCEPT: half}, {ACCEPT: Fraction(1)}], ProbabilityError),
        ([{Step("p", "z"): Fraction(1)}, {ACCEPT: Fraction(1)}], AlphabetError),
        ([{Step("r", "x"): Fraction(1)}, {ACCEPT: Fraction(1)}], AlphabetError),
        ([{ACCEPT: Fraction(1)}], AlphabetError),
    ],
)
def test_from_table_errors(row, error) -> None:
    alphabet = Alphabet(tests=("t",), actions=("p",))
    with pytest.raises(error):
        automaton_from_table(alphabet, {"x": row})


def test_validate_catches_dangling_steps() -> None:
    atoms = enumerate_atoms(PQ)
    aut = Automaton(PQ, atoms, ["x"], [[dirac(Step("p", 3))]])
    with pytest.raises(InvariantViolation):
        aut.validate()
