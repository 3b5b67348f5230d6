from __future__ import annotations

from fractions import Fraction

from .ast import (
    Act,
    And,
    Expr,
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
    TestExpr,
    Zero,
)

# Expression binding levels, loosest first.
_PROB, _GUARD, _SEQ, _POST, _PRIMARY = range(5)
# Test binding levels.
_OR, _AND, _NOT = range(3)


def print_rat(r: Fraction) -> str:
    return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"


def print_test(b: TestExpr) -> str:
    return _test(b, _OR)


def _test(b: TestExpr, level: int) -> str:
    if isinstance(b, Zero):
        return "0"
    if isinstance(b, One):
        return "1"
    if isinstance(b, Prim):
        return b.name
    if isinstance(b, Not):
        return "~" + _test(b.arg, _NOT)
    if isinstance(b, Or):
        text, own = f"{_test(b.left, _OR)} | {_test(b.right, _AND)}", _OR
    elif isinstance(b, And):
        text, own = f"{_test(b.left, _AND)} & {_test(b.right, _NOT)}", _AND
    else:
        raise TypeError(f"not a test: {b!r}")
    return f"({text})" if own < level else text


def print_expr(e: Expr) -> str:
    """Concrete syntax for e with the fewest parentheses that re-parse to e."""
    return _expr(e, _PROB)


def _expr(e: Expr, level: int) -> str:
    if isinstance(e, Act):
        return e.name
    if isinstance(e, Return):
        return f"ret {e.name}"
    if isinstance(e, Test):
        if isinstance(e.test, (Zero, One, Prim)):
            return _test(e.test, _NOT)
        return f"[{print_test(e.test)}]"
    if isinstance(e, ProbChoice):
        text = f"{_expr(e.left, _GUARD)} +{{{print_rat(e.prob)}}} {_expr(e.right, _PROB)}"
        own = _PROB
    elif isinstance(e, GuardedChoice):
        text = f"{_expr(e.left, _SEQ)} +[{print_test(e.guard)}] {_expr(e.right, _GUARD)}"
        own = _GUARD
    elif isinstance(e, Seq):
        text = f"{_expr(e.left, _POST)} ; {_expr(e.right, _SEQ)}"
        own = _SEQ
    elif isinstance(e, GuardedLoop):
        text = f"{_expr(e.body, _POST)} *[{print_test(e.guard)}]"
        own = _POST
    elif isinstance(e, ProbLoop):
        text = f"{_expr(e.body, _POST)} *{{{print_rat(e.prob)}}}"
        own = _POST
    else:
        raise TypeError(f"not an expression: {e!r}")
    return f"({text})" if own < level else text


def print_header(alphabet) -> str:
    parts = []
    for keyword, names in (("tests", alphabet.tests), ("actions", alphabet.actions), ("outputs", alphabet.outputs)):
        if names:
            parts.append(f"{keyword} {','.join(names)};")
    return " ".join(parts)


def print_program(alphabet, e: Expr) -> str:
    header = print_header(alphabet)
    return f"{header} {print_expr(e)}" if header else print_expr(e)
