from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from collections.abc import Mapping
from typing import Any, Callable, Hashable, Iterator, Union

from probgkat.errors import InvariantViolation, ProbabilityError
from probgkat.syntax.printer import print_expr, print_rat

Rat = Fraction


@dataclass(frozen=True)
class Reject:
    def __str__(self) -> str:
        return "✗"


@dataclass(frozen=True)
class Accept:
    def __str__(self) -> str:
        return "✓"


@dataclass(frozen=True)
class Ret:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Step:
    action: str
    target: Hashable

    def __str__(self) -> str:
        return f"({self.action}, {target_text(self.target)})"


Outcome = Union[Reject, Accept, Ret, Step]
REJECT = Reject()
ACCEPT = Accept()


def target_text(target: Any) -> str:
    if isinstance(target, int):
        return str(target)
    try:
        return print_expr(target)
    except TypeError:
        return str(target)


def outcome_key(x: Outcome) -> tuple:
    """Canonical order: Reject < Accept < Ret by name < Step by (action, target)."""
    if isinstance(x, Reject):
        return (0,)
    if isinstance(x, Accept):
        return (1,)
    if isinstance(x, Ret):
        return (2, x.name)
    target = x.target
    if isinstance(target, int):
        return (3, x.action, 0, target, "")
    return (3, x.action, 1, 0, target_text(target))


def is_observable(x: Outcome) -> bool:
    return not isinstance(x, Step)


def check_probability(r: Fraction, what: str = "probability") -> Fraction:
    r = Fraction(r)
    if not 0 <= r <= 1:
        raise ProbabilityError(f"{what} {r} outside [0,1]")
    return r


class Dist(Mapping):
    """Immutable outcome -> probability map; entries are positive and sum to exactly 1."""

    __slots__ = ("_support", "_hash")

    def __init__(self, support: Mapping[Outcome, Fraction]):
        entries: dict[Outcome, Fraction] = {}
        for x, p in support.items():
            p = Fraction(p)
            if p < 0:
                raise InvariantViolation(f"negative mass {p} on {x}")
            if p:
                entries[x] = entries.get(x, Fraction(0)) + p
        total = sum(entries.values(), Fraction(0))
        if total != 1:
            raise InvariantViolation(f"distribution mass {total} != 1")
        self._support = dict(sorted(entries.items(), key=lambda kv: outcome_key(kv[0])))
        self._hash = hash(frozenset(self._support.items()))

    # Mapping protocol; missing outcomes have probability 0.
    def __getitem__(self, x: Outcome) -> Fraction:
        return self._support[x]

    def __iter__(self) -> Iterator[Outcome]:
        return iter(self._support)

    def __len__(self) -> int:
        return len(self._support)

    def __call__(self, x: Outcome) -> Fraction:
        return self._support.get(x, Fraction(0))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Dist):
            return self._support == other._support
        return NotImplemented

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return "Dist({" + ", ".join(f"{x}: {print_rat(p)}" for x, p in self._support.items()) + "})"

    def support(self) -> tuple[Outcome, ...]:
        return tuple(self._support)

    def mass(self, pred: Callable[[Outcome], bool]) -> Fraction:
        return sum((p for x, p in self._support.items() if pred(x)), Fraction(0))

    def steps(self) -> Iterator[tuple[Step, Fraction]]:
        for x, p in self._support.items():
            if isinstance(x, Step):
                yield x, p

    def observables(self) -> dict[Outcome, Fraction]:
        return {x: p for x, p in self._support.items() if is_observable(x)}

    def convex_extend(self, f: Callable[[Outcome], "Dist"]) -> "Dist":
        out: dict[Outcome, Fraction] = {}
        for x, p in self._support.items():
            for y, q in f(x).items():
                out[y] = out.get(y, Fraction(0)) + p * q
        return Dist(out)

    def map_outcomes(self, f: Callable[[Outcome], Outcome]) -> "Dist":
        out: dict[Outcome, Fraction] = {}
        for x, p in self._support.items():
            y = f(x)
            out[y] = out.get(y, Fraction(0)) + p
        return Dist(out)

    def map_targets(self, f: Callable[[Any], Any]) -> "Dist":
        return self.map_outcomes(lambda x: Step(x.action, f(x.target)) if isinstance(x, Step) else x)


def dirac(x: Outcome) -> Dist:
    return Dist({x: Fraction(1)})


def convex(r: Fraction, nu: Dist, mu: Dist) -> Dist:
    """r·nu + (1-r)·mu."""
    r = check_probability(r)
    out: dict[Outcome, Fraction] = {}
    if r:
        for x, p in nu.items():
            out[x] = r * p
    if r != 1:
        for x, p in mu.items():
            out[x] = out.get(x, Fraction(0)) + (1 - r) * p
    return Dist(out)


def mass(nu: Dist, pred: Callable[[Outcome], bool]) -> Fraction:
    return nu.mass(pred)


def convex_extend(f: Callable[[Outcome], Dist], nu: Dist) -> Dist:
    return nu.convex_extend(f)
