"""Parsers for proof scripts, system files and solution maps.

Extends the program grammar with::

    script   := decls (system | line)*
    system   := "system" ident "{" (ident "=" sterm ";")* "}"
    sterm    := pterm ("+[" test "]" sterm)?
    pterm    := satom ("+{" rat "}" pterm)?
    satom    := "(" sterm ")" | sexpr ("." ident)?
    line     := int ":" pexpr "==" pexpr "by" just
    just     := "refl" | "sym" int | "trans" int int | "cong" postfix int | "BA"
              | "ua" ident ident "[" ident "=" int "," int (";" ...)* "]"
              | AXIOM ("{" ident ":=" value ("," ...)* "}")? ("from" int ("," int)*)?
    map      := decls (ident "=" pexpr ";")*

Congruence contexts write the hole as ``_``.
"""
from __future__ import annotations

from typing import Dict, List, Optional, Tuple

from probgkat.errors import BindingError, ParseError
from probgkat.syntax.ast import Expr
from probgkat.syntax.atoms import Alphabet
from probgkat.syntax.parser import Parser

from .proof import AxiomStep, BoolStep, Cong, Hole, Justification, ProofLine, ProofScript, Refl, Sym, Trans, UAStep
from .systems import Closed, Convex, Guarded, Prefixed, SalomaaSystem, Term
from .table import METAVAR_SORTS, parse_axiom_id


class ScriptParser(Parser):
    def __init__(self, text: str, alphabet: Optional[Alphabet] = None):
        super().__init__(text, alphabet)
        self.holes = False

    def int_literal(self) -> int:
        tok = self.tok
        if tok.kind != "int":
            self.error(f"expected line number, found {self.describe(tok)}")
        self.advance()
        return int(tok.value)

    def primary(self) -> Expr:
        if self.holes and self.at("_"):
            self.advance()
            return Hole()  # type: ignore[return-value]
        return super().primary()

    def seq_continues(self) -> bool:
        # `;` closes a system or map entry when followed by `}`, the end, or `ident =`
        after, then = self.peek(), self.peek(2)
        if after.kind == "eof" or (after.kind, after.value) == ("op", "}"):
            return False
        return not (after.kind == "ident" and (then.kind, then.value) == ("op", "="))

    # ---- systems ----------------------------------------------------------

    def system(self) -> Tuple[str, SalomaaSystem]:
        self.expect("system")
        name_tok = self.tok
        name = self.ident()
        self.expect("{")
        order: List[str] = []
        tau: Dict[str, Term] = {}
        while not self.accept("}"):
            var_tok = self.tok
            var = self.ident()
            if var in tau:
                self.error(f"indeterminate {var!r} defined twice", var_tok)
            if self.alphabet.sort_of(var) is not None:
                self.error(f"indeterminate {var!r} clashes with a declared name", var_tok)
            self.expect("=")
            tau[var] = self.sterm()
            order.append(var)
            self.expect(";")
        try:
            return name, SalomaaSystem(self.alphabet, tuple(order), tau)
        except BindingError as exc:
            self.error(str(exc), name_tok)

    def sterm(self) -> Term:
        left = self.pterm()
        if self.accept("+["):
            b = self.test()
            self.expect("]")
            return Guarded(left, b, self.sterm())
        return left

    def pterm(self) -> Term:
        left = self.satom()
        if self.accept("+{"):
            r = self.rat()
            self.expect("}")
            right = self.pterm()
            if isinstance(left, Guarded) or isinstance(right, Guarded):
                self.error("guarded terms cannot appear under a probabilistic choice")
            return Convex(left, r, right)
        return left

    def satom(self) -> Term:
        if self.at("("):
            start = self.pos
            # a parenthesized closed factor, else a parenthesized system term
            try:
                inner = self.sexpr()
            except ParseError:
                self.pos = start
                self.advance()
                term = self.sterm()
                self.expect(")")
                return term
            return self._prefix(inner)
        return self._prefix(self.sexpr())

    def _prefix(self, coeff: Expr) -> Term:
        if self.accept("."):
            return Prefixed(coeff, self.ident())
        return Closed(coeff)

    # ---- proof lines ------------------------------------------------------

    def line(self) -> ProofLine:
        start = self.tok
        number = self.int_literal()
        self.expect(":")
        lhs = self.expr()
        self.expect("==")
        rhs = self.expr()
        self.expect("by")
        return ProofLine(number, lhs, rhs, self.justification(), start.line)

    def justification(self) -> Justification:
        tok = self.tok
        if self.accept("refl"):
            return Refl()
        if self.accept("sym"):
            return Sym(self.int_literal())
        if self.accept("trans"):
            left = self.int_literal()
            return Trans(left, self.int_literal())
        if self.accept("cong"):
            self.holes = True
            try:
                context = self.postfix()
            finally:
                self.holes = False
            return Cong(context, self.int_literal())
        if self.accept("BA"):
            return BoolStep()
        if self.accept("ua"):
            system = self.ident()
            var = self.ident()
            self.expect("[")
            solutions: Dict[str, Tuple[int, int]] = {}
            while True:
                x = self.ident()
                self.expect("=")
                a = self.int_literal()
                self.expect(",")
                solutions[x] = (a, self.int_literal())
                if not self.accept(";"):
                    break
            self.expect("]")
            return UAStep(system, var, solutions)
        name = self.ident()
        try:
            axiom = parse_axiom_id(name)
        except BindingError as exc:
            self.error(str(exc), tok)
        bindings: Dict[str, object] = {}
        if self.accept("{"):
            while True:
                key_tok = self.tok
                key = self.ident()
                if key not in METAVAR_SORTS:
                    self.error(f"unknown metavariable {key!r}", key_tok)
                self.expect(":=")
                bindings[key] = self.binding_value(key)
                if not self.accept(","):
                    break
            self.expect("}")
        refs: List[int] = []
        if self.accept("from"):
            refs.append(self.int_literal())
            while self.accept(","):
                refs.append(self.int_literal())
        return AxiomStep(axiom, bindings, tuple(refs))

    def binding_value(self, key: str) -> object:
        sort = METAVAR_SORTS[key]
        if sort == "expr":
            return self.expr()
        if sort == "test":
            return self.test()
        if sort == "rat":
            return self.rat()
        tok = self.tok
        name = self.ident()
        if self.alphabet.sort_of(name) != "outputs":
            self.error(self.misuse(name, self.alphabet.sort_of(name), "output"), tok)
        return name

    def script(self) -> ProofScript:
        self.header()
        out = ProofScript(self.alphabet)
        while not self.at_end():
            if self.at("system"):
                tok = self.tok
                name, system = self.system()
                if name in out.systems:
                    self.error(f"system {name!r} declared twice", tok)
                out.systems[name] = system
            else:
                out.lines.append(self.line())
        return out


def parse_script(text: str) -> ProofScript:
    return ScriptParser(text).script()


def parse_system_file(text: str) -> Tuple[str, SalomaaSystem]:
    p = ScriptParser(text)
    p.header()
    named = p.system()
    p.expect_end()
    return named


def parse_solution_map(text: str, alphabet: Alphabet) -> Dict[str, Expr]:
    """`x = expr;` entries; an optional header must agree on tests with alphabet."""
    p = ScriptParser(text, alphabet)
    if p.at("tests") or p.at("actions") or p.at("outputs"):
        start = p.tok
        own = p.header()
        if own.tests != alphabet.tests:
            p.error("solution map declares different tests than its system", start)
        p.alphabet = alphabet.union(own)
    out: Dict[str, Expr] = {}
    while not p.at_end():
        tok = p.tok
        var = p.ident()
        if var in out:
            p.error(f"{var!r} mapped twice", tok)
        p.expect("=")
        out[var] = p.expr()
        p.expect(";")
    return out
