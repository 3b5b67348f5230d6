from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Tuple

from probgkat.errors import BindingError, SideConditionError
from probgkat.semantics.derivative import termination
from probgkat.syntax.ast import (
    ONE,
    ZERO,
    And,
    Expr,
    GuardedChoice,
    GuardedLoop,
    Not,
    One,
    Or,
    ProbChoice,
    ProbLoop,
    Return,
    Seq,
    Test,
    TestExpr,
    is_expr,
    is_test,
    prim_names,
    expr_names,
)
from probgkat.syntax.atoms import Alphabet, enumerate_atoms

Bindings = Mapping[str, object]
Equation = Tuple[Expr, Expr]


class AxiomId(str, Enum):
    G1 = "G1"
    G2 = "G2"
    G3 = "G3"
    G4 = "G4"
    D = "D"
    P1 = "P1"
    P2 = "P2"
    P3 = "P3"
    P4 = "P4"
    S1 = "S1"
    S2 = "S2"
    S3 = "S3"
    S4 = "S4"
    S5 = "S5"
    S6 = "S6"
    S7 = "S7"
    S8 = "S8"
    L1 = "L1"
    L2 = "L2"
    L3 = "L3"
    L4 = "L4"
    L5 = "L5"
    L6 = "L6"
    F1 = "F1"
    F2 = "F2"
    DF1 = "DF1"
    DF2 = "DF2"
    DF3 = "DF3"
    DF4 = "DF4"
    DF5 = "DF5"
    DF6 = "DF6"
    DF7 = "DF7"
    DF8 = "DF8"
    DF9 = "DF9"
    DF10 = "DF10"
    DF11 = "DF11"
    DF12 = "DF12"
    BA = "BA"
    UA = "UA"


METAVAR_SORTS = {
    "e": "expr",
    "f": "expr",
    "g": "expr",
    "h": "expr",
    "b": "test",
    "c": "test",
    "r": "rat",
    "s": "rat",
    "v": "output",
}


@dataclass(frozen=True)
class Rule:
    metavars: Tuple[str, ...]
    build: Callable[[Bindings], Equation]
    premises: Callable[[Bindings], List[Equation]] = field(default=lambda m: [])
    conditions: Tuple[Tuple[str, Callable[[Bindings, Alphabet], bool]], ...] = ()


def _t(b: TestExpr) -> Expr:
    return Test(b)


def _never_terminates(key: str) -> Tuple[str, Callable[[Bindings, Alphabet], bool]]:
    def check(m: Bindings, alphabet: Alphabet) -> bool:
        e = m[key]
        return all(termination(e, atom) == 0 for atom in enumerate_atoms(alphabet))  # type: ignore[arg-type]

    return (f"E({key}) = 0 at every atom", check)


def _p4(m: Bindings) -> Equation:
    e, f, g, r, s = m["e"], m["f"], m["g"], m["r"], m["s"]
    return (
        ProbChoice(ProbChoice(e, r, f), s, g),
        ProbChoice(e, r * s, ProbChoice(f, (1 - r) * s / (1 - r * s), g)),
    )


def _df11(m: Bindings) -> Equation:
    e, f, g, r, s = m["e"], m["f"], m["g"], m["r"], m["s"]
    l = 1 - (1 - r) * (1 - s)
    return ProbChoice(e, r, ProbChoice(f, s, g)), ProbChoice(ProbChoice(e, r / l, f), l, g)


def _loop_premise(m: Bindings) -> List[Equation]:
    return [(m["e"], GuardedChoice(ProbChoice(m["f"], m["s"], ONE), m["c"], m["g"]))]


def _l6(m: Bindings) -> Equation:
    e, f, c, r, s = m["e"], m["f"], m["c"], m["r"], m["s"]
    loop = ProbLoop(e, r)
    weight = r * s / (1 - r * (1 - s))
    return Seq(_t(c), loop), Seq(_t(c), ProbChoice(Seq(f, loop), weight, ONE))


RULES: Dict[AxiomId, Rule] = {
    AxiomId.G1: Rule(("e", "b"), lambda m: (GuardedChoice(m["e"], m["b"], m["e"]), m["e"])),
    AxiomId.G2: Rule(
        ("e", "f", "b"),
        lambda m: (GuardedChoice(m["e"], m["b"], m["f"]), GuardedChoice(Seq(_t(m["b"]), m["e"]), m["b"], m["f"])),
    ),
    AxiomId.G3: Rule(
        ("e", "f", "b"),
        lambda m: (GuardedChoice(m["e"], m["b"], m["f"]), GuardedChoice(m["f"], Not(m["b"]), m["e"])),
    ),
    AxiomId.G4: Rule(
        ("e", "f", "g", "b", "c"),
        lambda m: (
            GuardedChoice(GuardedChoice(m["e"], m["b"], m["f"]), m["c"], m["g"]),
            GuardedChoice(m["e"], And(m["b"], m["c"]), GuardedChoice(m["f"], m["c"], m["g"])),
        ),
    ),
    AxiomId.D: Rule(
        ("e", "f", "g", "b", "r"),
        lambda m: (
            ProbChoice(m["e"], m["r"], GuardedChoice(m["f"], m["b"], m["g"])),
            GuardedChoice(ProbChoice(m["e"], m["r"], m["f"]), m["b"], ProbChoice(m["e"], m["r"], m["g"])),
        ),
    ),
    AxiomId.P1: Rule(("e", "r"), lambda m: (ProbChoice(m["e"], m["r"], m["e"]), m["e"])),
    AxiomId.P2: Rule(("e", "f"), lambda m: (ProbChoice(m["e"], Fraction(1), m["f"]), m["e"])),
    AxiomId.P3: Rule(
        ("e", "f", "r"),
        lambda m: (ProbChoice(m["e"], m["r"], m["f"]), ProbChoice(m["f"], 1 - m["r"], m["e"])),
    ),
    AxiomId.P4: Rule(("e", "f", "g", "r", "s"), _p4, conditions=(("rs != 1", lambda m, a: m["r"] * m["s"] != 1),)),
    AxiomId.S1: Rule(("e",), lambda m: (Seq(ONE, m["e"]), m["e"])),
    AxiomId.S2: Rule(("e",), lambda m: (Seq(m["e"], ONE), m["e"])),
    AxiomId.S3: Rule(
        ("e", "f", "g"),
        lambda m: (Seq(Seq(m["e"], m["f"]), m["g"]), Seq(m["e"], Seq(m["f"], m["g"]))),
    ),
    AxiomId.S4: Rule(("e",), lambda m: (Seq(ZERO, m["e"]), ZERO)),
    AxiomId.S5: Rule(
        ("e", "f", "g", "b"),
        lambda m: (
            Seq(GuardedChoice(m["e"], m["b"], m["f"]), m["g"]),
            GuardedChoice(Seq(m["e"], m["g"]), m["b"], Seq(m["f"], m["g"])),
        ),
    ),
    AxiomId.S6: Rule(
        ("e", "f", "g", "r"),
        lambda m: (
            Seq(ProbChoice(m["e"], m["r"], m["f"]), m["g"]),
            ProbChoice(Seq(m["e"], m["g"]), m["r"], Seq(m["f"], m["g"])),
        ),
    ),
    AxiomId.S7: Rule(("v", "e"), lambda m: (Seq(Return(m["v"]), m["e"]), Return(m["v"]))),
    AxiomId.S8: Rule(("b", "c"), lambda m: (Seq(_t(m["b"]), _t(m["c"])), _t(And(m["b"], m["c"])))),
    AxiomId.L1: Rule(
        ("e", "b"),
        lambda m: (
            GuardedLoop(m["e"], m["b"]),
            GuardedChoice(Seq(m["e"], GuardedLoop(m["e"], m["b"])), m["b"], ONE),
        ),
    ),
    AxiomId.L2: Rule(
        ("e", "r"),
        lambda m: (
            ProbLoop(m["e"], m["r"]),
            ProbChoice(Seq(m["e"], ProbLoop(m["e"], m["r"])), m["r"], ONE),
        ),
    ),
    AxiomId.L3: Rule(
        ("e", "b", "c"),
        lambda m: (
            GuardedLoop(GuardedChoice(m["e"], m["c"], ONE), m["b"]),
            GuardedLoop(Seq(_t(m["c"]), m["e"]), m["b"]),
        ),
    ),
    AxiomId.L4: Rule(("e",), lambda m: (GuardedLoop(m["e"], One()), ProbLoop(m["e"], Fraction(1)))),
    AxiomId.L5: Rule(
        ("e", "f", "g", "b", "c", "s"),
        lambda m: (
            Seq(_t(m["c"]), GuardedLoop(m["e"], m["b"])),
            Seq(_t(m["c"]), GuardedChoice(Seq(m["f"], GuardedLoop(m["e"], m["b"])), m["b"], ONE)),
        ),
        premises=_loop_premise,
        conditions=(("s > 0", lambda m, a: m["s"] > 0),),
    ),
    AxiomId.L6: Rule(
        ("e", "f", "g", "c", "r", "s"),
        _l6,
        premises=_loop_premise,
        conditions=(("r(1-s) != 1", lambda m, a: m["r"] * (1 - m["s"]) != 1),),
    ),
    AxiomId.F1: Rule(
        ("e", "f", "g", "b"),
        lambda m: (m["g"], Seq(GuardedLoop(m["e"], m["b"]), m["f"])),
        premises=lambda m: [(m["g"], GuardedChoice(Seq(m["e"], m["g"]), m["b"], m["f"]))],
        conditions=(_never_terminates("e"),),
    ),
    AxiomId.F2: Rule(
        ("e", "f", "g", "r"),
        lambda m: (m["g"], Seq(ProbLoop(m["e"], m["r"]), m["f"])),
        premises=lambda m: [(m["g"], ProbChoice(Seq(m["e"], m["g"]), m["r"], m["f"]))],
        conditions=(_never_terminates("e"),),
    ),
    AxiomId.DF1: Rule(
        ("e", "f", "g", "b", "c"),
        lambda m: (
            GuardedChoice(m["e"], m["b"], GuardedChoice(m["f"], m["c"], m["g"])),
            GuardedChoice(GuardedChoice(m["e"], m["b"], m["f"]), Or(m["b"], m["c"]), m["g"]),
        ),
    ),
    AxiomId.DF2: Rule(("e", "b"), lambda m: (GuardedChoice(m["e"], m["b"], ZERO), Seq(_t(m["b"]), m["e"]))),
    AxiomId.DF3: Rule(
        ("e", "f", "b"),
        lambda m: (Seq(_t(m["b"]), GuardedChoice(m["e"], m["b"], m["f"])), Seq(_t(m["b"]), m["e"])),
    ),
    AxiomId.DF4: Rule(
        ("e", "f", "g", "b", "c"),
        lambda m: (
            GuardedChoice(GuardedChoice(m["e"], m["b"], m["f"]), m["c"], m["g"]),
            GuardedChoice(GuardedChoice(m["e"], And(m["b"], m["c"]), m["f"]), m["c"], m["g"]),
        ),
    ),
    AxiomId.DF5: Rule(
        ("e", "f", "g", "h", "b", "c"),
        lambda m: (
            GuardedChoice(GuardedChoice(m["e"], m["b"], m["f"]), m["c"], GuardedChoice(m["g"], m["b"], m["h"])),
            GuardedChoice(GuardedChoice(m["e"], m["c"], m["g"]), m["b"], GuardedChoice(m["f"], m["c"], m["h"])),
        ),
    ),
    AxiomId.DF6: Rule(
        ("e", "f", "b", "c"),
        lambda m: (
            Seq(_t(m["b"]), GuardedChoice(m["e"], m["c"], m["f"])),
            GuardedChoice(Seq(_t(m["b"]), m["e"]), m["c"], Seq(_t(m["b"]), m["f"])),
        ),
    ),
    AxiomId.DF7: Rule(
        ("e", "f", "b", "c"),
        lambda m: (
            Seq(_t(m["b"]), GuardedChoice(m["e"], m["c"], m["f"])),
            Seq(_t(m["b"]), GuardedChoice(Seq(_t(m["b"]), m["e"]), m["c"], m["f"])),
        ),
    ),
    AxiomId.DF8: Rule(
        ("e", "f", "g", "b", "r"),
        lambda m: (
            ProbChoice(GuardedChoice(m["e"], m["b"], m["f"]), m["r"], m["g"]),
            GuardedChoice(ProbChoice(m["e"], m["r"], m["g"]), m["b"], ProbChoice(m["f"], m["r"], m["g"])),
        ),
    ),
    AxiomId.DF9: Rule(
        ("e", "f", "g", "h", "b", "r"),
        lambda m: (
            ProbChoice(GuardedChoice(m["e"], m["b"], m["f"]), m["r"], GuardedChoice(m["g"], m["b"], m["h"])),
            GuardedChoice(ProbChoice(m["e"], m["r"], m["g"]), m["b"], ProbChoice(m["f"], m["r"], m["h"])),
        ),
    ),
    AxiomId.DF10: Rule(
        ("e", "f", "b", "r"),
        lambda m: (
            Seq(_t(m["b"]), ProbChoice(m["e"], m["r"], m["f"])),
            ProbChoice(Seq(_t(m["b"]), m["e"]), m["r"], Seq(_t(m["b"]), m["f"])),
        ),
    ),
    AxiomId.DF11: Rule(
        ("e", "f", "g", "r", "s"),
        _df11,
        conditions=(("1 - (1-r)(1-s) != 0", lambda m, a: (1 - m["r"]) * (1 - m["s"]) != 1),),
    ),
    AxiomId.DF12: Rule(("e", "f"), lambda m: (GuardedChoice(m["e"], One(), m["f"]), m["e"])),
}

QUASI_EQUATIONAL = frozenset({AxiomId.L5, AxiomId.L6, AxiomId.F1, AxiomId.F2})
EQUATIONAL = tuple(a for a in RULES if a not in QUASI_EQUATIONAL)


def parse_axiom_id(name: str) -> AxiomId:
    try:
        return AxiomId(name)
    except ValueError as exc:
        raise BindingError(f"unknown axiom {name!r}") from exc


def _rule(axiom: AxiomId) -> Rule:
    rule = RULES.get(axiom)
    if rule is None:
        raise BindingError(f"{axiom.value} is a proof rule, not an instantiable axiom")
    return rule


def _check_bindings(axiom: AxiomId, rule: Rule, bindings: Bindings) -> Dict[str, object]:
    missing = [k for k in rule.metavars if k not in bindings]
    if missing:
        raise BindingError(f"{axiom.value}: missing binding(s) {', '.join(missing)}")
    extra = [k for k in bindings if k not in rule.metavars]
    if extra:
        raise BindingError(f"{axiom.value}: unexpected binding(s) {', '.join(extra)}")
    out: Dict[str, object] = {}
    for key in rule.metavars:
        value, sort = bindings[key], METAVAR_SORTS[key]
        if sort == "expr" and not is_expr(value):
            raise BindingError(f"{axiom.value}: {key} must be an expression")
        if sort == "test" and not is_test(value):
            raise BindingError(f"{axiom.value}: {key} must be a test")
        if sort == "output" and not isinstance(value, str):
            raise BindingError(f"{axiom.value}: {key} must be an output name")
        if sort == "rat":
            if not isinstance(value, (int, Fraction)) or isinstance(value, bool):
                raise BindingError(f"{axiom.value}: {key} must be a rational")
            value = Fraction(value)
            if not 0 <= value <= 1:
                raise SideConditionError(f"0 <= {key} <= 1")
        out[key] = value
    return out


def _mentioned_tests(bindings: Bindings) -> Tuple[str, ...]:
    names: List[str] = []
    for value in bindings.values():
        if is_expr(value):
            names.extend(n for sort, n in expr_names(value) if sort == "tests")  # type: ignore[arg-type]
        elif is_test(value):
            names.extend(prim_names(value))  # type: ignore[arg-type]
    return tuple(dict.fromkeys(names))


def instantiate_axiom(axiom: AxiomId, bindings: Bindings, alphabet: Optional[Alphabet] = None) -> Equation:
    """(lhs, rhs) of the axiom instance; raises when a binding or side condition is off."""
    rule = _rule(axiom)
    m = _check_bindings(axiom, rule, bindings)
    atoms_over = alphabet if alphabet is not None else Alphabet(tests=_mentioned_tests(m))
    for description, holds in rule.conditions:
        if not holds(m, atoms_over):
            raise SideConditionError(f"{axiom.value}: {description}")
    return rule.build(m)


def premises(axiom: AxiomId, bindings: Bindings) -> List[Equation]:
    rule = _rule(axiom)
    return rule.premises(_check_bindings(axiom, rule, bindings))
