from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, Mapping, Tuple, Union

from probgkat.equivalence.refinement import bisimilar
from probgkat.errors import BindingError
from probgkat.prob import Accept, Outcome, Reject, Ret, Step
from probgkat.semantics.automaton import Automaton
from probgkat.semantics.derivative import termination
from probgkat.semantics.expand import convex_sum, guarded_sum
from probgkat.syntax.ast import ONE, ZERO, Act, Expr, GuardedChoice, ProbChoice, Return, Seq, TestExpr
from probgkat.syntax.atoms import Alphabet, enumerate_atoms
from probgkat.syntax.printer import print_expr, print_rat, print_test
from probgkat.utils.logger import logger


@dataclass(frozen=True)
class Closed:
    expr: Expr


@dataclass(frozen=True)
class Prefixed:
    coeff: Expr
    var: str


@dataclass(frozen=True)
class Convex:
    left: "PTerm"
    prob: Fraction
    right: "PTerm"


@dataclass(frozen=True)
class Guarded:
    left: "Term"
    guard: TestExpr
    right: "Term"


PTerm = Union[Closed, Prefixed, Convex]
Term = Union[Closed, Prefixed, Convex, Guarded]


@dataclass
class SalomaaSystem:
    alphabet: Alphabet
    indeterminates: Tuple[str, ...] = ()
    tau: Dict[str, Term] = field(default_factory=dict)

    def __post_init__(self) -> None:
        missing = [x for x in self.indeterminates if x not in self.tau]
        if missing:
            raise BindingError(f"no right-hand side for {', '.join(missing)}")
        for x, rhs in self.tau.items():
            for _, var in prefixed_terms(rhs):
                if var not in self.tau:
                    raise BindingError(f"right-hand side of {x} mentions unknown indeterminate {var!r}")


def prefixed_terms(t: Term) -> Iterator[Tuple[Expr, str]]:
    if isinstance(t, Prefixed):
        yield t.coeff, t.var
    elif isinstance(t, (Convex, Guarded)):
        yield from prefixed_terms(t.left)
        yield from prefixed_terms(t.right)


def is_salomaa(sys: SalomaaSystem) -> bool:
    """Every coefficient of an indeterminate has zero termination weight at every atom."""
    atoms = enumerate_atoms(sys.alphabet)
    return all(
        termination(g, atom) == 0
        for rhs in sys.tau.values()
        for g, _ in prefixed_terms(rhs)
        for atom in atoms
    )


def _outcome_term(x: Outcome, names: Mapping[int, str]) -> PTerm:
    if isinstance(x, Reject):
        return Closed(ZERO)
    if isinstance(x, Accept):
        return Closed(ONE)
    if isinstance(x, Ret):
        return Closed(Return(x.name))
    if isinstance(x, Step):
        return Prefixed(Act(x.action), names[x.target])
    raise TypeError(f"not an outcome: {x!r}")


def system_of_automaton(aut: Automaton) -> SalomaaSystem:
    """One indeterminate x1..xn per state; right-hand sides unroll the transitions in atom and outcome order."""
    names = {x: f"x{x + 1}" for x in aut.states()}
    tau: Dict[str, Term] = {}
    for x in aut.states():
        branches = [
            (atom.as_test(), convex_sum([(_outcome_term(o, names), p) for o, p in nu.items()], Convex))
            for atom, nu in zip(aut.atoms, aut.trans[x])
        ]
        tau[names[x]] = guarded_sum(branches, Guarded, Closed(ZERO))
    logger.debug("System of automaton indeterminates={n}", n=len(names))
    return SalomaaSystem(aut.alphabet, tuple(names.values()), tau)


def substitute(h: Mapping[str, Expr], t: Term) -> Expr:
    if isinstance(t, Closed):
        return t.expr
    if isinstance(t, Prefixed):
        if t.var not in h:
            raise BindingError(f"unbound indeterminate {t.var!r}")
        return Seq(t.coeff, h[t.var])
    if isinstance(t, Convex):
        return ProbChoice(substitute(h, t.left), t.prob, substitute(h, t.right))
    if isinstance(t, Guarded):
        return GuardedChoice(substitute(h, t.left), t.guard, substitute(h, t.right))
    raise TypeError(f"not a system term: {t!r}")


def apply_system(sys: SalomaaSystem, vector: Mapping[str, Expr]) -> Dict[str, Expr]:
    return {x: substitute(vector, sys.tau[x]) for x in sys.indeterminates}


def check_solution(sys: SalomaaSystem, h: Mapping[str, Expr], alphabet: Alphabet | None = None) -> bool:
    """Whether h(x) is bisimilar to h applied to the right-hand side of x, for every x."""
    alphabet = alphabet or sys.alphabet
    for x in sys.indeterminates:
        if x not in h:
            raise BindingError(f"no solution given for {x}")
        if not bisimilar(h[x], substitute(h, sys.tau[x]), alphabet):
            logger.info("Solution fails at indeterminate {x}", x=x)
            return False
    return True


def print_term(t: Term) -> str:
    if isinstance(t, Closed):
        return f"({print_expr(t.expr)})"
    if isinstance(t, Prefixed):
        return f"({print_expr(t.coeff)}) . {t.var}"
    if isinstance(t, Convex):
        left = print_term(t.left)
        if isinstance(t.left, Convex):
            left = f"({left})"
        return f"{left} +{{{print_rat(t.prob)}}} {print_term(t.right)}"
    return f"({print_term(t.left)}) +[{print_test(t.guard)}] ({print_term(t.right)})"


def print_system(name: str, sys: SalomaaSystem) -> str:
    body = "".join(f"  {x} = {print_term(sys.tau[x])};\n" for x in sys.indeterminates)
    return f"system {name} {{\n{body}}}\n"
