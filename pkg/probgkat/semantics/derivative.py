from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from probgkat.errors import InvariantViolation
from probgkat.prob import ACCEPT, REJECT, Accept, Dist, Outcome, Ret, Step, convex, dirac
from probgkat.syntax.ast import (
    ONE,
    Act,
    Expr,
    GuardedChoice,
    GuardedLoop,
    ProbChoice,
    ProbLoop,
    Return,
    Seq,
    Test,
)
from probgkat.syntax.atoms import Atom, entails
from probgkat.utils.config import settings


def derivative(e: Expr, atom: Atom) -> Dist:
    """Distribution over ✓, ✗, returns and (action, expression) steps of e under atom."""
    return _derivative(e, atom)


@lru_cache(maxsize=settings.derivative_cache)
def _derivative(e: Expr, atom: Atom) -> Dist:
    if isinstance(e, Test):
        return dirac(ACCEPT if entails(atom, e.test) else REJECT)
    if isinstance(e, Return):
        return dirac(Ret(e.name))
    if isinstance(e, Act):
        return dirac(Step(e.name, ONE))
    if isinstance(e, GuardedChoice):
        return _derivative(e.left if entails(atom, e.guard) else e.right, atom)
    if isinstance(e, ProbChoice):
        return convex(e.prob, _derivative(e.left, atom), _derivative(e.right, atom))
    if isinstance(e, Seq):
        return seq_adjust(_derivative(e.left, atom), atom, e.right)
    if isinstance(e, GuardedLoop):
        if not entails(atom, e.guard):
            return dirac(ACCEPT)
        body = _derivative(e.body, atom)
        t = body(ACCEPT)
        if t == 1:
            return dirac(REJECT)
        return _loop_reweight(body, e, Fraction(0), 1 - t, Fraction(1))
    if isinstance(e, ProbLoop):
        body = _derivative(e.body, atom)
        t, r = body(ACCEPT), e.prob
        if r == 1 and t == 1:
            return dirac(REJECT)
        denom = 1 - r * t
        return _loop_reweight(body, e, (1 - r) / denom, denom, r)
    raise TypeError(f"not an expression: {e!r}")


def _loop_reweight(body: Dist, loop: Expr, accept: Fraction, denom: Fraction, scale: Fraction) -> Dist:
    # Body ✓ mass is replaced by `accept`; everything else is scaled by scale/denom
    # and steps continue with the loop.
    if denom == 0:
        raise InvariantViolation(f"zero loop denominator for {loop!r}")
    out: dict[Outcome, Fraction] = {ACCEPT: accept}
    for x, p in body.items():
        if isinstance(x, Accept):
            continue
        if isinstance(x, Step):
            x = Step(x.action, Seq(x.target, loop))
        out[x] = out.get(x, Fraction(0)) + scale * p / denom
    return Dist(out)


def seq_adjust(nu: Dist, atom: Atom, f: Expr) -> Dist:
    """Reroute nu through f: ✓ continues as f, steps continue with ;f."""
    out: dict[Outcome, Fraction] = {}
    for x, p in nu.items():
        if isinstance(x, Accept):
            for y, q in _derivative(f, atom).items():
                out[y] = out.get(y, Fraction(0)) + p * q
            continue
        if isinstance(x, Step):
            x = Step(x.action, Seq(x.target, f))
        out[x] = out.get(x, Fraction(0)) + p
    return Dist(out)


def termination(e: Expr, atom: Atom) -> Fraction:
    if isinstance(e, Test):
        return Fraction(1 if entails(atom, e.test) else 0)
    if isinstance(e, (Act, Return)):
        return Fraction(0)
    if isinstance(e, GuardedChoice):
        return termination(e.left if entails(atom, e.guard) else e.right, atom)
    if isinstance(e, ProbChoice):
        return e.prob * termination(e.left, atom) + (1 - e.prob) * termination(e.right, atom)
    if isinstance(e, Seq):
        return termination(e.left, atom) * termination(e.right, atom)
    if isinstance(e, GuardedLoop):
        return Fraction(0 if entails(atom, e.guard) else 1)
    if isinstance(e, ProbLoop):
        t, r = termination(e.body, atom), e.prob
        if r == 1 and t == 1:
            return Fraction(0)
        return (1 - r) / (1 - r * t)
    raise TypeError(f"not an expression: {e!r}")


def size_bound(e: Expr) -> int:
    if isinstance(e, (Test, Return)):
        return 1
    if isinstance(e, Act):
        return 2
    if isinstance(e, (GuardedChoice, Seq, ProbChoice)):
        return size_bound(e.left) + size_bound(e.right)
    if isinstance(e, (GuardedLoop, ProbLoop)):
        return size_bound(e.body)
    raise TypeError(f"not an expression: {e!r}")


def clear_cache() -> None:
    _derivative.cache_clear()
