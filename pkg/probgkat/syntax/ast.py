"""Two-sorted abstract syntax: Boolean tests and program expressions."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union


# ---- tests ---------------------------------------------------------------


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class One:
    pass


@dataclass(frozen=True)
class Prim:
    name: str


@dataclass(frozen=True)
class Or:
    left: "TestExpr"
    right: "TestExpr"


@dataclass(frozen=True)
class And:
    left: "TestExpr"
    right: "TestExpr"


@dataclass(frozen=True)
class Not:
    arg: "TestExpr"


TestExpr = Union[Zero, One, Prim, Or, And, Not]
TEST_TYPES = (Zero, One, Prim, Or, And, Not)


# ---- expressions ---------------------------------------------------------


@dataclass(frozen=True)
class Act:
    name: str


@dataclass(frozen=True)
class Test:
    test: TestExpr

    __test__ = False  # not a pytest class


@dataclass(frozen=True)
class GuardedChoice:
    left: "Expr"
    guard: TestExpr
    right: "Expr"


@dataclass(frozen=True)
class Seq:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class GuardedLoop:
    body: "Expr"
    guard: TestExpr


@dataclass(frozen=True)
class Return:
    name: str


@dataclass(frozen=True)
class ProbChoice:
    left: "Expr"
    prob: Fraction
    right: "Expr"


@dataclass(frozen=True)
class ProbLoop:
    body: "Expr"
    prob: Fraction


Expr = Union[Act, Test, GuardedChoice, Seq, GuardedLoop, Return, ProbChoice, ProbLoop]
EXPR_TYPES = (Act, Test, GuardedChoice, Seq, GuardedLoop, Return, ProbChoice, ProbLoop)

ZERO = Test(Zero())
ONE = Test(One())


def is_test(node: object) -> bool:
    return isinstance(node, TEST_TYPES)


def is_expr(node: object) -> bool:
    return isinstance(node, EXPR_TYPES)


def prim_names(b: TestExpr) -> Iterator[str]:
    if isinstance(b, Prim):
        yield b.name
    elif isinstance(b, (Or, And)):
        yield from prim_names(b.left)
        yield from prim_names(b.right)
    elif isinstance(b, Not):
        yield from prim_names(b.arg)


def expr_names(e: Expr) -> Iterator[tuple[str, str]]:
    """(sort, name) pairs for every identifier in e; sort is tests/actions/outputs."""
    if isinstance(e, Act):
        yield ("actions", e.name)
    elif isinstance(e, Return):
        yield ("outputs", e.name)
    elif isinstance(e, Test):
        for n in prim_names(e.test):
            yield ("tests", n)
    elif isinstance(e, GuardedChoice):
        yield from expr_names(e.left)
        for n in prim_names(e.guard):
            yield ("tests", n)
        yield from expr_names(e.right)
    elif isinstance(e, (Seq, ProbChoice)):
        yield from expr_names(e.left)
        yield from expr_names(e.right)
    elif isinstance(e, GuardedLoop):
        yield from expr_names(e.body)
        for n in prim_names(e.guard):
            yield ("tests", n)
    elif isinstance(e, ProbLoop):
        yield from expr_names(e.body)


def ast_size(e: Expr) -> int:
    if isinstance(e, (GuardedChoice, Seq, ProbChoice)):
        return 1 + ast_size(e.left) + ast_size(e.right)
    if isinstance(e, (GuardedLoop, ProbLoop)):
        return 1 + ast_size(e.body)
    return 1


def is_gkat(e: Expr) -> bool:
    """True when e uses only the GKAT constructs: no returns, no probabilistic choice or loop."""
    if isinstance(e, (Return, ProbChoice, ProbLoop)):
        return False
    if isinstance(e, (GuardedChoice, Seq)):
        return is_gkat(e.left) and is_gkat(e.right)
    if isinstance(e, GuardedLoop):
        return is_gkat(e.body)
    return True
