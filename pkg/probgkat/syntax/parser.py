"""Recursive-descent parser for ProbGKAT programs.

Grammar (loosest first)::

    program  := decls expr
    decls    := ("tests" ids ";")? ("actions" ids ";")? ("outputs" ids ";")?
    pexpr    := gexpr ("+{" rat "}" gexpr)*
    gexpr    := sexpr ("+[" test "]" sexpr)*
    sexpr    := postfix (";" postfix)*
    postfix  := primary ("*[" test "]" | "*{" rat "}")*
    primary  := ident | "ret" ident | "0" | "1" | "[" test "]" | "(" pexpr ")"
    test     := conj ("|" conj)*        conj := neg ("&" neg)*
    neg      := "~" neg | "0" | "1" | ident | "(" test ")"

Identifiers in expression position are resolved by the declarations header.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, NoReturn, Optional

from probgkat.errors import AlphabetError, ParseError

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
from .atoms import KEYWORDS, Alphabet

TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\f]+)
    |(?P<nl>\n)
    |(?P<comment>\#[^\n]*)
    |(?P<dec>\d+\.\d+)
    |(?P<int>\d+)
    |(?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    |(?P<op>\+\{|\+\[|\*\[|\*\{|==|:=|[{}\[\]();,~&|/:=.])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # int | dec | ident | op | eof
    value: str
    line: int
    column: int


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup or ""
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, m.start() - line_start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class Parser:
    def __init__(self, text: str, alphabet: Optional[Alphabet] = None):
        self.tokens = tokenize(text)
        self.pos = 0
        self.alphabet = alphabet if alphabet is not None else Alphabet()

    # ---- cursor -----------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.tok
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at(self, value: str) -> bool:
        return self.tok.kind in ("op", "ident", "int") and self.tok.value == value

    def accept(self, value: str) -> bool:
        if self.at(value):
            self.advance()
            return True
        return False

    def expect(self, value: str) -> Token:
        if not self.at(value):
            self.error(f"expected {value!r}, found {self.describe(self.tok)}")
        return self.advance()

    def at_end(self) -> bool:
        return self.tok.kind == "eof"

    def expect_end(self) -> None:
        if not self.at_end():
            self.error(f"unexpected {self.describe(self.tok)}")

    def error(self, message: str, tok: Optional[Token] = None) -> NoReturn:
        tok = tok or self.tok
        raise ParseError(message, tok.line, tok.column)

    @staticmethod
    def describe(tok: Token) -> str:
        return "end of input" if tok.kind == "eof" else repr(tok.value)

    def ident(self) -> str:
        tok = self.tok
        if tok.kind != "ident" or tok.value in KEYWORDS:
            self.error(f"expected identifier, found {self.describe(tok)}")
        self.advance()
        return tok.value

    # ---- header -----------------------------------------------------------

    def header(self) -> Alphabet:
        start = self.tok
        sorts = {}
        for keyword in ("tests", "actions", "outputs"):
            if self.accept(keyword):
                names = [self.ident()]
                while self.accept(","):
                    names.append(self.ident())
                self.expect(";")
                sorts[keyword] = tuple(names)
        try:
            self.alphabet = Alphabet(**sorts)
        except AlphabetError as exc:
            self.error(str(exc), start)
        return self.alphabet

    # ---- rationals --------------------------------------------------------

    def rat(self) -> Fraction:
        tok = self.tok
        if tok.kind == "dec":
            self.advance()
            value = Fraction(tok.value)
        elif tok.kind == "int":
            self.advance()
            num = int(tok.value)
            den = 1
            if self.accept("/"):
                den_tok = self.tok
                if den_tok.kind != "int":
                    self.error(f"expected denominator, found {self.describe(den_tok)}")
                self.advance()
                den = int(den_tok.value)
                if den == 0:
                    self.error("zero denominator", den_tok)
            value = Fraction(num, den)
        else:
            self.error(f"expected probability, found {self.describe(tok)}")
        if not 0 <= value <= 1:
            self.error(f"probability {value} outside [0,1]", tok)
        return value

    # ---- tests ------------------------------------------------------------

    def test(self) -> TestExpr:
        out = self.conj()
        while self.accept("|"):
            out = Or(out, self.conj())
        return out

    def conj(self) -> TestExpr:
        out = self.neg()
        while self.accept("&"):
            out = And(out, self.neg())
        return out

    def neg(self) -> TestExpr:
        tok = self.tok
        if self.accept("~"):
            return Not(self.neg())
        if self.accept("("):
            inner = self.test()
            self.expect(")")
            return inner
        if tok.kind == "int" and tok.value in ("0", "1"):
            self.advance()
            return Zero() if tok.value == "0" else One()
        name = self.ident()
        sort = self.alphabet.sort_of(name)
        if sort != "tests":
            self.error(self.misuse(name, sort, "test"), tok)
        return Prim(name)

    @staticmethod
    def misuse(name: str, sort: Optional[str], wanted: str) -> str:
        if sort is None:
            return f"undeclared identifier {name!r}"
        return f"{name!r} is declared among {sort}, expected a {wanted}"

    # ---- expressions ------------------------------------------------------
    # Binary levels are read iteratively and folded to the right.

    def expr(self) -> Expr:
        parts = [self.gexpr()]
        weights: List[Fraction] = []
        while self.accept("+{"):
            weights.append(self.rat())
            self.expect("}")
            parts.append(self.gexpr())
        e = parts.pop()
        while parts:
            e = ProbChoice(parts.pop(), weights.pop(), e)
        return e

    def gexpr(self) -> Expr:
        parts = [self.sexpr()]
        guards: List[TestExpr] = []
        while self.accept("+["):
            guards.append(self.test())
            self.expect("]")
            parts.append(self.sexpr())
        e = parts.pop()
        while parts:
            e = GuardedChoice(parts.pop(), guards.pop(), e)
        return e

    def sexpr(self) -> Expr:
        parts = [self.postfix()]
        while self.at(";") and self.seq_continues():
            self.advance()
            parts.append(self.postfix())
        e = parts.pop()
        while parts:
            e = Seq(parts.pop(), e)
        return e

    def seq_continues(self) -> bool:
        return True

    def postfix(self) -> Expr:
        e = self.primary()
        while True:
            if self.accept("*["):
                b = self.test()
                self.expect("]")
                e = GuardedLoop(e, b)
            elif self.accept("*{"):
                r = self.rat()
                self.expect("}")
                e = ProbLoop(e, r)
            else:
                return e

    def primary(self) -> Expr:
        tok = self.tok
        if self.accept("("):
            inner = self.expr()
            self.expect(")")
            return inner
        if self.accept("["):
            b = self.test()
            self.expect("]")
            return Test(b)
        if tok.kind == "int" and tok.value in ("0", "1"):
            self.advance()
            return Test(Zero() if tok.value == "0" else One())
        if self.accept("ret"):
            name_tok = self.tok
            name = self.ident()
            sort = self.alphabet.sort_of(name)
            if sort != "outputs":
                self.error(self.misuse(name, sort, "output"), name_tok)
            return Return(name)
        name = self.ident()
        sort = self.alphabet.sort_of(name)
        if sort == "actions":
            return Act(name)
        if sort == "tests":
            return Test(Prim(name))
        if sort == "outputs":
            self.error(f"output {name!r} must be written 'ret {name}'", tok)
        self.error(f"undeclared identifier {name!r}", tok)


def parse_program(text: str) -> tuple[Alphabet, Expr]:
    """Parse a declarations header followed by one expression."""
    p = Parser(text)
    alphabet = p.header()
    e = p.expr()
    p.expect_end()
    return alphabet, e


def parse_expr(text: str, alphabet: Alphabet) -> Expr:
    p = Parser(text, alphabet)
    e = p.expr()
    p.expect_end()
    return e


def parse_test(text: str, alphabet: Alphabet) -> TestExpr:
    p = Parser(text, alphabet)
    b = p.test()
    p.expect_end()
    return b
