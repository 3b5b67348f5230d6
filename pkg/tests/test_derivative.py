from fractions import Fraction

from probgkat.prob import ACCEPT, REJECT, Dist, Ret, Step, dirac
from probgkat.semantics import build_automaton, derivative, seq_adjust, size_bound, termination
from probgkat.syntax import (
    ONE,
    ZERO,
    Act,
    GuardedChoice,
    GuardedLoop,
    Prim,
    ProbChoice,
    ProbLoop,
    Return,
    Seq,
    Test,
    enumerate_atoms,
)

from .generators import ALPHABET, random_expr, random_sized_expr

p, q = Act("p"), Act("q")
t = Prim("t")
half = Fraction(1, 2)
ATOMS = enumerate_atoms(ALPHABET)
T_ATOM = ALPHABET.parse_atom("t")
NOT_T = ALPHABET.parse_atom("")


def test_primitives() -> None:
    assert derivative(p, NOT_T) == dirac(Step("p", ONE))
    assert derivative(Return("v"), NOT_T) == dirac(Ret("v"))
    assert derivative(Test(t), T_ATOM) == dirac(ACCEPT)
    assert derivative(Test(t), NOT_T) == dirac(REJECT)
    assert derivative(ZERO, T_ATOM) == dirac(REJECT)


def test_guarded_choice_follows_the_atom() -> None:
    e = GuardedChoice(p, t, Return("v"))
    assert derivative(e, T_ATOM) == dirac(Step("p", ONE))
    assert derivative(e, NOT_T) == dirac(Ret("v"))


def test_sequencing_reroutes_acceptance() -> None:
    e = Seq(ProbChoice(ONE, Fraction(1, 3), Return("v")), q)
    assert derivative(e, NOT_T) == Dist({Ret("v"): Fraction(2, 3), Step("q", ONE): Fraction(1, 3)})
    assert derivative(Seq(p, q), NOT_T) == dirac(Step("p", Seq(ONE, q)))


def test_guarded_loop_renormalizes_the_body() -> None:
    loop = GuardedLoop(ProbChoice(p, half, ONE), t)
    assert derivative(loop, T_ATOM) == dirac(Step("p", Seq(ONE, loop)))
    assert derivative(loop, NOT_T) == dirac(ACCEPT)
    assert derivative(GuardedLoop(ONE, t), T_ATOM) == dirac(REJECT)


def test_probabilistic_loop_weights() -> None:
    loop = ProbLoop(p, half)
    assert derivative(loop, NOT_T) == Dist({ACCEPT: half, Step("p", Seq(ONE, loop)): half})
    body = ProbChoice(Return("v"), half, ONE)
    assert derivative(ProbLoop(body, half), NOT_T) == Dist({ACCEPT: Fraction(2, 3), Ret("v"): Fraction(1, 3)})
    assert derivative(ProbLoop(ONE, Fraction(1)), NOT_T) == dirac(REJECT)
    assert derivative(ProbLoop(ONE, Fraction(0)), NOT_T) == dirac(ACCEPT)


def test_termination_matches_accept_mass(rng) -> None:
    for _ in range(500):
        e = random_expr(rng, ALPHABET, depth=4)
        for atom in ATOMS:
            assert termination(e, atom) == derivative(e, atom)(ACCEPT)


def test_termination_of_loops() -> None:
    assert termination(GuardedLoop(p, t), T_ATOM) == 0
    assert termination(GuardedLoop(p, t), NOT_T) == 1
    assert termination(ProbLoop(ProbChoice(p, half, ONE), half), NOT_T) == Fraction(2, 3)
    assert termination(ProbLoop(ONE, Fraction(1)), NOT_T) == 0


def test_size_bound_values() -> None:
    assert size_bound(p) == 2
    assert size_bound(Seq(p, q)) == 4
    assert size_bound(GuardedLoop(Seq(p, q), t)) == 4
    assert size_bound(ProbChoice(Return("v"), half, ONE)) == 2


def test_bound_is_attained_by_an_action() -> None:
    aut, root = build_automaton(p, ALPHABET)
    assert root == 0
    assert aut.descriptors == [p, ONE]


def test_reachable_states_within_size_bound(rng) -> None:
    for _ in range(500):
        e = random_sized_expr(rng, 40)
        aut, _ = build_automaton(e, ALPHABET)
        assert aut.n_states <= size_bound(e), e


def test_derivatives_are_distributions(rng) -> None:
    for _ in range(200):
        e = random_expr(rng, ALPHABET, depth=4)
        for atom in ATOMS:
            assert sum(derivative(e, atom).values()) == 1


def test_certain_choice_is_its_left_branch(rng) -> None:
    for _ in range(200):
        e, f = random_expr(rng), random_expr(rng)
        for atom in ATOMS:
            assert derivative(ProbChoice(e, Fraction(1), f), atom) == derivative(e, atom)
            assert derivative(ProbChoice(e, Fraction(0), f), atom) == derivative(f, atom)


def test_rerouting_acceptance_is_the_continuation(rng) -> None:
    for _ in range(200):
        f = random_expr(rng)
        for atom in ATOMS:
            assert seq_adjust(dirac(ACCEPT), atom, f) == derivative(f, atom)


def test_rerouting_keeps_other_outcomes() -> None:
    quarter = Fraction(1, 4)
    nu = Dist({Ret("v"): quarter, REJECT: quarter, Step("p", ONE): half})
    assert seq_adjust(nu, T_ATOM, q) == Dist({Ret("v"): quarter, REJECT: quarter, Step("p", Seq(ONE, q)): half})
