from __future__ import annotations

from dataclasses import dataclass, field, fields
from typing import Dict, List, Mapping, Optional, Tuple, Union

from probgkat.equivalence.refinement import bisimilar
from probgkat.errors import BindingError, ProofError, SideConditionError
from probgkat.syntax.ast import EXPR_TYPES, Expr, Test, is_test
from probgkat.syntax.atoms import Alphabet, bool_equiv
from probgkat.syntax.printer import print_expr
from probgkat.utils.logger import logger

from .systems import SalomaaSystem, is_salomaa, substitute
from .table import QUASI_EQUATIONAL, AxiomId, Equation, instantiate_axiom, premises


@dataclass(frozen=True)
class Hole:
    """The position a congruence context plugs its equation into."""


@dataclass(frozen=True)
class AxiomStep:
    axiom: AxiomId
    bindings: Mapping[str, object] = field(default_factory=dict, hash=False)
    premise_refs: Tuple[int, ...] = ()


@dataclass(frozen=True)
class Refl:
    pass


@dataclass(frozen=True)
class Sym:
    ref: int


@dataclass(frozen=True)
class Trans:
    left: int
    right: int


@dataclass(frozen=True)
class Cong:
    context: object
    ref: int


@dataclass(frozen=True)
class BoolStep:
    pass


@dataclass(frozen=True)
class UAStep:
    system: str
    var: str
    # indeterminate -> (line proving the first map a solution there, line for the second map)
    solutions: Mapping[str, Tuple[int, int]] = field(default_factory=dict, hash=False)


Justification = Union[AxiomStep, Refl, Sym, Trans, Cong, BoolStep, UAStep]


@dataclass(frozen=True)
class ProofLine:
    number: int
    lhs: Expr
    rhs: Expr
    justification: Justification
    source_line: int = 0


@dataclass
class ProofScript:
    alphabet: Alphabet
    systems: Dict[str, SalomaaSystem] = field(default_factory=dict)
    lines: List[ProofLine] = field(default_factory=list)


@dataclass
class ProofReport:
    ok: bool
    checked: int = 0
    failing_line: Optional[int] = None
    message: str = ""
    expected: Optional[str] = None
    found: Optional[str] = None

    def summary(self) -> str:
        if self.ok:
            return f"verified {self.checked} line(s)"
        text = f"line {self.failing_line}: {self.message}"
        if self.expected is not None:
            text += f"\n  expected: {self.expected}\n  found:    {self.found}"
        return text


class StepFailure(ProofError):
    def __init__(self, message: str, expected: Optional[Equation] = None, found: Optional[Equation] = None):
        super().__init__(message)
        self.expected = expected
        self.found = found


def print_equation(eq: Equation) -> str:
    return f"{print_expr(eq[0])} == {print_expr(eq[1])}"


def plug(context: object, e: Expr) -> Expr:
    if isinstance(context, Hole):
        return e
    if isinstance(context, EXPR_TYPES) and not isinstance(context, Test):
        return type(context)(
            **{
                f.name: plug(getattr(context, f.name), e) if _has_hole(getattr(context, f.name)) else getattr(context, f.name)
                for f in fields(context)
            }
        )
    return context  # type: ignore[return-value]


def _has_hole(node: object) -> bool:
    if isinstance(node, Hole):
        return True
    if isinstance(node, EXPR_TYPES) and not isinstance(node, Test):
        return any(_has_hole(getattr(node, f.name)) for f in fields(node))
    return False


def ba_equal(e: object, f: object, alphabet: Alphabet) -> bool:
    """Structural equality of expressions up to Boolean equivalence of their tests."""
    if is_test(e) and is_test(f):
        return bool_equiv(e, f, alphabet)  # type: ignore[arg-type]
    if type(e) is not type(f):
        return False
    if isinstance(e, EXPR_TYPES):
        return all(ba_equal(getattr(e, x.name), getattr(f, x.name), alphabet) for x in fields(e))
    return e == f


class ProofChecker:
    def __init__(self, script: ProofScript, cross_check: bool = False):
        self.script = script
        self.cross_check = cross_check
        self.proved: Dict[int, Equation] = {}

    def cited(self, ref: int, line: ProofLine) -> Equation:
        if ref >= line.number or ref not in self.proved:
            raise StepFailure(f"line {ref} is not an earlier line")
        return self.proved[ref]

    def expect(self, eq: Equation, line: ProofLine, what: str) -> None:
        found = (line.lhs, line.rhs)
        if eq != found:
            raise StepFailure(f"{what} does not match the line", expected=eq, found=found)

    def check_line(self, line: ProofLine) -> None:
        j = line.justification
        if isinstance(j, Refl):
            self.expect((line.lhs, line.lhs), line, "reflexivity")
        elif isinstance(j, Sym):
            a, b = self.cited(j.ref, line)
            self.expect((b, a), line, "symmetry")
        elif isinstance(j, Trans):
            a, b = self.cited(j.left, line)
            b2, c = self.cited(j.right, line)
            if b != b2:
                raise StepFailure("transitivity needs matching middle terms", expected=(b, b), found=(b, b2))
            self.expect((a, c), line, "transitivity")
        elif isinstance(j, Cong):
            if not _has_hole(j.context):
                raise StepFailure("congruence context has no hole")
            a, b = self.cited(j.ref, line)
            self.expect((plug(j.context, a), plug(j.context, b)), line, "congruence")
        elif isinstance(j, BoolStep):
            if not ba_equal(line.lhs, line.rhs, self.script.alphabet):
                raise StepFailure("sides differ beyond Boolean equivalence of tests", found=(line.lhs, line.rhs))
        elif isinstance(j, AxiomStep):
            self.check_axiom(j, line)
        elif isinstance(j, UAStep):
            self.check_ua(j, line)
        else:
            raise StepFailure(f"unknown justification {j!r}")

    def check_axiom(self, j: AxiomStep, line: ProofLine) -> None:
        try:
            eq = instantiate_axiom(j.axiom, j.bindings, self.script.alphabet)
            needed = premises(j.axiom, j.bindings)
        except (BindingError, SideConditionError) as exc:
            raise StepFailure(str(exc)) from exc
        if j.axiom in QUASI_EQUATIONAL and len(j.premise_refs) != len(needed):
            raise StepFailure(f"{j.axiom.value} needs {len(needed)} premise line(s) cited with 'from'")
        if j.axiom not in QUASI_EQUATIONAL and j.premise_refs:
            raise StepFailure(f"{j.axiom.value} takes no premises")
        for ref, premise in zip(j.premise_refs, needed):
            got = self.cited(ref, line)
            if got != premise:
                raise StepFailure(f"line {ref} does not prove the premise", expected=premise, found=got)
        self.expect(eq, line, f"instance of {j.axiom.value}")

    def check_ua(self, j: UAStep, line: ProofLine) -> None:
        system = self.script.systems.get(j.system)
        if system is None:
            raise StepFailure(f"unknown system {j.system!r}")
        if not is_salomaa(system):
            raise StepFailure(f"system {j.system} is not a Salomaa system")
        if j.var not in system.tau:
            raise StepFailure(f"{j.var!r} is not an indeterminate of {j.system}")
        missing = [x for x in system.indeterminates if x not in j.solutions]
        if missing:
            raise StepFailure(f"no solution lines for {', '.join(missing)}")
        first = {x: self.cited(j.solutions[x][0], line)[0] for x in system.indeterminates}
        second = {x: self.cited(j.solutions[x][1], line)[0] for x in system.indeterminates}
        for x in system.indeterminates:
            for h, ref in ((first, j.solutions[x][0]), (second, j.solutions[x][1])):
                want = (h[x], substitute(h, system.tau[x]))
                got = self.proved[ref]
                if got != want:
                    raise StepFailure(f"line {ref} is not the solution equation for {x}", expected=want, found=got)
        self.expect((first[j.var], second[j.var]), line, "uniqueness of solutions")

    def run(self) -> ProofReport:
        last = 0
        for line in self.script.lines:
            try:
                if line.number <= last:
                    raise StepFailure(f"line numbers must increase (after {last})")
                self.check_line(line)
                if self.cross_check and not bisimilar(line.lhs, line.rhs, self.script.alphabet):
                    raise StepFailure("verified equation is not bisimilar", found=(line.lhs, line.rhs))
            except StepFailure as exc:
                logger.info("Proof rejected line={n} reason={r}", n=line.number, r=str(exc))
                return ProofReport(
                    ok=False,
                    checked=len(self.proved),
                    failing_line=line.number,
                    message=str(exc),
                    expected=print_equation(exc.expected) if exc.expected else None,
                    found=print_equation(exc.found) if exc.found else None,
                )
            self.proved[line.number] = (line.lhs, line.rhs)
            last = line.number
        logger.info("Proof verified lines={n}", n=len(self.proved))
        return ProofReport(ok=True, checked=len(self.proved))


def check_proof(script: ProofScript, cross_check: bool = False) -> ProofReport:
    return ProofChecker(script, cross_check).run()
