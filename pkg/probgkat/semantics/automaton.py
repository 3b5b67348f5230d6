from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from probgkat.errors import AlphabetError, InvariantViolation, ProbabilityError
from probgkat.prob import Dist, Outcome, Step
from probgkat.syntax.ast import Expr
from probgkat.syntax.atoms import Alphabet, Atom, enumerate_atoms
from probgkat.syntax.printer import print_expr
from probgkat.utils.logger import logger

from .derivative import derivative

Descriptor = Union[Expr, str]


@dataclass
class Automaton:
    """Finite ProbGKAT automaton; trans[x][i] is the distribution of state x under atoms[i]."""

    alphabet: Alphabet
    atoms: Tuple[Atom, ...]
    descriptors: List[Descriptor] = field(default_factory=list)
    trans: List[List[Dist]] = field(default_factory=list)

    @property
    def n_states(self) -> int:
        return len(self.descriptors)

    def states(self) -> range:
        return range(len(self.descriptors))

    def dist(self, x: int, i: int) -> Dist:
        return self.trans[x][i]

    def descr_text(self, x: int) -> str:
        d = self.descriptors[x]
        return d if isinstance(d, str) else print_expr(d)

    def successors(self, x: int) -> set[int]:
        return {s.target for row in self.trans[x] for s, _ in row.steps()}

    def check_state(self, x: int) -> None:
        if not 0 <= x < self.n_states:
            raise ValueError(f"state {x} out of range 0..{self.n_states - 1}")

    def validate(self) -> None:
        if len(self.trans) != self.n_states:
            raise InvariantViolation("transition table does not cover every state")
        for x, row in enumerate(self.trans):
            if len(row) != len(self.atoms):
                raise InvariantViolation(f"state {x} lacks a transition for some atom")
            for nu in row:
                for step, _ in nu.steps():
                    if not isinstance(step.target, int) or not 0 <= step.target < self.n_states:
                        raise InvariantViolation(f"state {x} steps to unknown state {step.target!r}")


class StateTable:
    def __init__(self) -> None:
        self._ids: Dict[Expr, int] = {}
        self.exprs: List[Expr] = []

    def intern(self, e: Expr) -> Tuple[int, bool]:
        found = self._ids.get(e)
        if found is not None:
            return found, False
        self._ids[e] = len(self.exprs)
        self.exprs.append(e)
        return self._ids[e], True

    def __getitem__(self, e: Expr) -> int:
        return self._ids[e]

    def __contains__(self, e: object) -> bool:
        return e in self._ids

    def __len__(self) -> int:
        return len(self.exprs)


def build_automata(exprs: Sequence[Expr], alphabet: Alphabet, max_tests: Optional[int] = None) -> Tuple[Automaton, List[int]]:
    atoms = enumerate_atoms(alphabet, max_tests)
    table = StateTable()
    roots: List[int] = []
    queue: deque[int] = deque()
    for e in exprs:
        x, new = table.intern(e)
        roots.append(x)
        if new:
            queue.append(x)
    rows: Dict[int, List[Dist]] = {}
    while queue:
        x = queue.popleft()
        row: List[Dist] = []
        for atom in atoms:
            nu = derivative(table.exprs[x], atom)
            for step, _ in nu.steps():
                y, new = table.intern(step.target)
                if new:
                    queue.append(y)
            row.append(nu.map_targets(table.__getitem__))
        rows[x] = row
    aut = Automaton(alphabet, atoms, list(table.exprs), [rows[x] for x in range(len(table))])
    logger.debug("Built automaton states={n} atoms={k} roots={r}", n=aut.n_states, k=len(atoms), r=len(roots))
    return aut, roots


def build_automaton(e: Expr, alphabet: Alphabet, max_tests: Optional[int] = None) -> Tuple[Automaton, int]:
    aut, roots = build_automata([e], alphabet, max_tests)
    return aut, roots[0]


def merge_automata(a1: Automaton, a2: Automaton) -> Tuple[Automaton, Dict[int, int], Dict[int, int]]:
    """Disjoint union of a1 and a2 sharing states with equal expression descriptors."""
    alphabet = a1.alphabet.union(a2.alphabet)
    # a2's atoms may follow a different test declaration order
    atom_map = [a2.alphabet.atom_index(atom) for atom in a1.atoms]
    descriptors: List[Descriptor] = list(a1.descriptors)
    remap1 = {x: x for x in a1.states()}
    shared = {d: x for x, d in enumerate(a1.descriptors) if not isinstance(d, str)}
    remap2: Dict[int, int] = {}
    for y, d in enumerate(a2.descriptors):
        if not isinstance(d, str) and d in shared:
            remap2[y] = shared[d]
        else:
            remap2[y] = len(descriptors)
            descriptors.append(d)
    trans: List[List[Dist]] = [list(row) for row in a1.trans]
    for y in a2.states():
        if remap2[y] < a1.n_states:
            continue
        trans.append([a2.trans[y][j].map_targets(remap2.__getitem__) for j in atom_map])
    merged = Automaton(alphabet, a1.atoms, descriptors, trans)
    logger.debug(
        "Merged automata left={n1} right={n2} merged={n}",
        n1=a1.n_states,
        n2=a2.n_states,
        n=merged.n_states,
    )
    return merged, remap1, remap2


def reachable(aut: Automaton, x: int) -> Tuple[Automaton, Dict[int, int]]:
    """Smallest subautomaton containing x, renumbered in breadth-first order."""
    aut.check_state(x)
    remap = {x: 0}
    order = [x]
    queue = deque([x])
    while queue:
        y = queue.popleft()
        for row in aut.trans[y]:
            for step, _ in row.steps():
                if step.target not in remap:
                    remap[step.target] = len(order)
                    order.append(step.target)
                    queue.append(step.target)
    trans = [[nu.map_targets(remap.__getitem__) for nu in aut.trans[y]] for y in order]
    return Automaton(aut.alphabet, aut.atoms, [aut.descriptors[y] for y in order], trans), remap


def is_homomorphism(f: Mapping[int, int], a1: Automaton, a2: Automaton) -> bool:
    if set(a1.alphabet.tests) != set(a2.alphabet.tests):
        return False
    # total on a1 and into a2
    if any(x not in f or not 0 <= f[x] < a2.n_states for x in a1.states()):
        return False
    atom_map = [a2.alphabet.atom_index(atom) for atom in a1.atoms]
    for x in a1.states():
        for i, j in enumerate(atom_map):
            if a1.trans[x][i].map_targets(f.__getitem__) != a2.trans[f[x]][j]:
                return False
    return True


def automaton_from_table(
    alphabet: Alphabet,
    table: Mapping[str, Sequence[Mapping[Outcome, Fraction]]],
) -> Automaton:
    """Automaton over named states; each row lists one distribution per atom in atom order.

    Step targets in the table are state names.
    """
    atoms = enumerate_atoms(alphabet)
    names = list(table)
    index = {name: i for i, name in enumerate(names)}
    trans: List[List[Dist]] = []
    for name in names:
        row = table[name]
        if len(row) != len(atoms):
            raise AlphabetError(f"state {name!r} has {len(row)} transitions for {len(atoms)} atoms")
        dists = []
        for support in row:
            entries: Dict[Outcome, Fraction] = {}
            for x, p in support.items():
                if isinstance(x, Step):
                    if x.target not in index:
                        raise AlphabetError(f"state {name!r} steps to unknown state {x.target!r}")
                    if x.action not in alphabet.actions:
                        raise AlphabetError(f"undeclared action {x.action!r}")
                    x = Step(x.action, index[x.target])
                entries[x] = entries.get(x, Fraction(0)) + Fraction(p)
            try:
                dists.append(Dist(entries))
            except InvariantViolation as exc:
                raise ProbabilityError(f"state {name!r}: {exc}") from exc
        trans.append(dists)
    return Automaton(alphabet, atoms, names, trans)
