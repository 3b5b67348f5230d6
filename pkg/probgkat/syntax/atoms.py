from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

from probgkat.errors import AlphabetError, AtomLimitError
from probgkat.utils.config import settings

from .ast import And, Not, One, Or, Prim, TestExpr, Zero, prim_names

IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
KEYWORDS = frozenset({"tests", "actions", "outputs", "ret", "system", "by", "from", "_"})


@dataclass(frozen=True)
class Alphabet:
    tests: tuple[str, ...] = ()
    actions: tuple[str, ...] = ()
    outputs: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        seen: dict[str, str] = {}
        for sort in ("tests", "actions", "outputs"):
            names = getattr(self, sort)
            if len(set(names)) != len(names):
                raise AlphabetError(f"duplicate name among {sort}: {names}")
            for name in names:
                if not IDENT.match(name) or name in KEYWORDS:
                    raise AlphabetError(f"invalid identifier {name!r}")
                if name in seen:
                    raise AlphabetError(f"{name!r} declared as both {seen[name]} and {sort}")
                seen[name] = sort

    def sort_of(self, name: str) -> Optional[str]:
        if name in self.tests:
            return "tests"
        if name in self.actions:
            return "actions"
        if name in self.outputs:
            return "outputs"
        return None

    def union(self, other: "Alphabet") -> "Alphabet":
        if set(self.tests) != set(other.tests):
            raise AlphabetError(f"test sets differ: {self.tests} vs {other.tests}")
        actions = self.actions + tuple(a for a in other.actions if a not in self.actions)
        outputs = self.outputs + tuple(v for v in other.outputs if v not in self.outputs)
        return Alphabet(self.tests, actions, outputs)

    def atoms(self, max_tests: Optional[int] = None) -> tuple["Atom", ...]:
        return enumerate_atoms(self, max_tests)

    def atom_index(self, atom: "Atom") -> int:
        """Position of atom in this alphabet's atom order (matched by assignment)."""
        index = 0
        for name in self.tests:
            index = 2 * index + (1 if atom[name] else 0)
        return index

    def parse_atom(self, text: str) -> "Atom":
        true = {t.strip() for t in text.split(",") if t.strip()}
        unknown = true - set(self.tests)
        if unknown:
            raise AlphabetError(f"unknown tests in atom literal: {sorted(unknown)}")
        return Atom(self.tests, tuple(t in true for t in self.tests))


@dataclass(frozen=True)
class Atom:
    tests: tuple[str, ...]
    values: tuple[bool, ...]

    @cached_property
    def assignment(self) -> dict[str, bool]:
        return dict(zip(self.tests, self.values))

    def __getitem__(self, name: str) -> bool:
        return self.assignment[name]

    def true_tests(self) -> tuple[str, ...]:
        return tuple(t for t, v in zip(self.tests, self.values) if v)

    def label(self) -> str:
        return ",".join(self.true_tests())

    def as_test(self) -> TestExpr:
        """The atom as a conjunction of literals in declaration order."""
        literals: list[TestExpr] = [Prim(t) if v else Not(Prim(t)) for t, v in zip(self.tests, self.values)]
        if not literals:
            return One()
        out = literals[0]
        for lit in literals[1:]:
            out = And(out, lit)
        return out

    def __str__(self) -> str:
        return "{" + ", ".join(f"{t}:{int(v)}" for t, v in zip(self.tests, self.values)) + "}"


def enumerate_atoms(alphabet: Alphabet, max_tests: Optional[int] = None) -> tuple[Atom, ...]:
    """All 2^|tests| atoms, lexicographic in declaration order with false < true."""
    limit = settings.max_tests if max_tests is None else max_tests
    n = len(alphabet.tests)
    if n > limit:
        raise AtomLimitError(f"{n} primitive tests exceed the limit of {limit} ({2 ** n} atoms)")
    return tuple(Atom(alphabet.tests, values) for values in itertools.product((False, True), repeat=n))


def entails(atom: Atom, b: TestExpr) -> bool:
    if isinstance(b, One):
        return True
    if isinstance(b, Zero):
        return False
    if isinstance(b, Prim):
        return atom[b.name]
    if isinstance(b, Not):
        return not entails(atom, b.arg)
    if isinstance(b, And):
        return entails(atom, b.left) and entails(atom, b.right)
    if isinstance(b, Or):
        return entails(atom, b.left) or entails(atom, b.right)
    raise TypeError(f"not a test: {b!r}")


def bool_equiv(b: TestExpr, c: TestExpr, alphabet: Optional[Alphabet] = None) -> bool:
    """Boolean equivalence by truth table over the alphabet (or the tests b and c mention)."""
    if b == c:
        return True
    if alphabet is None:
        names = tuple(dict.fromkeys(itertools.chain(prim_names(b), prim_names(c))))
        alphabet = Alphabet(tests=names)
    return all(entails(a, b) == entails(a, c) for a in enumerate_atoms(alphabet))
