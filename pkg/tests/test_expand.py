from fractions import Fraction

import pytest

from probgkat.equivalence import bisimilar
from probgkat.errors import InvariantViolation
from probgkat.prob import ACCEPT, Dist, Ret, Step
from probgkat.semantics import convex_sum, dist_expr, expand, guarded_sum
from probgkat.syntax import ONE, ZERO, Act, Alphabet, GuardedChoice, Prim, ProbChoice, ProbLoop, Return, Seq

from .generators import ALPHABET, random_expr

p = Act("p")
half = Fraction(1, 2)


def test_guarded_sum_shapes() -> None:
    t, u = Prim("t"), Prim("u")
    assert guarded_sum([], GuardedChoice, ZERO) == ZERO
    assert guarded_sum([(t, p)], GuardedChoice, ZERO) == p
    assert guarded_sum([(t, p), (u, ONE)], GuardedChoice, ZERO) == GuardedChoice(p, t, GuardedChoice(ONE, u, ZERO))


def test_convex_sum_renormalizes_the_tail() -> None:
    items = [(Return("v"), Fraction(1, 3)), (Return("w"), Fraction(1, 3)), (ONE, Fraction(1, 3))]
    assert convex_sum(items, ProbChoice) == ProbChoice(
        Return("v"), Fraction(1, 3), ProbChoice(Return("w"), half, ONE)
    )
    with pytest.raises(InvariantViolation):
        convex_sum([], ProbChoice)


def test_dist_expr() -> None:
    nu = Dist({ACCEPT: half, Step("p", ONE): Fraction(1, 4), Ret("v"): Fraction(1, 4)})
    assert dist_expr(nu) == ProbChoice(ONE, half, ProbChoice(Return("v"), half, Seq(p, ONE)))


def test_expand_single_atom() -> None:
    alphabet = Alphabet(actions=("p",))
    assert expand(ProbLoop(p, half), alphabet) == ProbChoice(ONE, half, Seq(p, Seq(ONE, ProbLoop(p, half))))


def test_expansion_is_bisimilar(rng) -> None:
    for _ in range(200):
        e = random_expr(rng, ALPHABET, depth=4)
        assert bisimilar(e, expand(e, ALPHABET), ALPHABET), e
