from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence, Tuple, TypeVar

from probgkat.errors import InvariantViolation
from probgkat.prob import Accept, Dist, Outcome, Reject, Ret, Step
from probgkat.syntax.ast import ONE, ZERO, Act, Expr, GuardedChoice, ProbChoice, Return, Seq, TestExpr
from probgkat.syntax.atoms import Alphabet, enumerate_atoms

from .derivative import derivative

T = TypeVar("T")


def guarded_sum(branches: Sequence[Tuple[TestExpr, T]], choice: Callable[[T, TestExpr, T], T], zero: T) -> T:
    """Right-nested guarded choice over (guard, body) pairs ending in zero; one branch is its body."""
    if not branches:
        return zero
    if len(branches) == 1:
        return branches[0][1]
    out = zero
    for guard, body in reversed(branches):
        out = choice(body, guard, out)
    return out


def convex_sum(items: Sequence[Tuple[T, Fraction]], choice: Callable[[T, Fraction, T], T]) -> T:
    """Right-nested convex combination; weights after the head are renormalized by 1 - r_head."""
    if not items:
        raise InvariantViolation("empty convex sum")
    head, r = items[0]
    if len(items) == 1:
        return head
    rest = [(body, s / (1 - r)) for body, s in items[1:]]
    return choice(head, r, convex_sum(rest, choice))


def exp_outcome(x: Outcome) -> Expr:
    if isinstance(x, Reject):
        return ZERO
    if isinstance(x, Accept):
        return ONE
    if isinstance(x, Ret):
        return Return(x.name)
    if isinstance(x, Step):
        return Seq(Act(x.action), x.target)
    raise TypeError(f"not an outcome: {x!r}")


def dist_expr(nu: Dist) -> Expr:
    return convex_sum([(exp_outcome(x), p) for x, p in nu.items()], ProbChoice)


def expand(e: Expr, alphabet: Alphabet) -> Expr:
    """The guarded sum over atoms of the convex sums read off the derivatives of e."""
    atoms = enumerate_atoms(alphabet)
    branches = [(atom.as_test(), dist_expr(derivative(e, atom))) for atom in atoms]
    return guarded_sum(branches, GuardedChoice, ZERO)
