from __future__ import annotations

from fractions import Fraction
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

from graphviz import Digraph
from pydantic import BaseModel, Field, ValidationError

from probgkat.errors import AlphabetError, InvariantViolation, ParseError, ProbabilityError
from probgkat.prob import ACCEPT, REJECT, Accept, Dist, Outcome, Reject, Ret, Step, target_text
from probgkat.syntax.atoms import Alphabet, enumerate_atoms
from probgkat.syntax.printer import print_rat

from .automaton import Automaton


class StepValue(BaseModel):
    action: str
    target: Union[int, str]


class OutcomeDoc(BaseModel):
    kind: Literal["accept", "reject", "return", "step"]
    value: Optional[Union[StepValue, str]] = None
    prob: str


class StateDoc(BaseModel):
    id: int
    descr: str


class TransDoc(BaseModel):
    state: int
    atom: int
    dist: List[OutcomeDoc]


class AutomatonDoc(BaseModel):
    tests: List[str] = Field(default_factory=list)
    atoms: List[str] = Field(default_factory=list, description="Atoms as comma-sets of true tests, in atom order")
    actions: List[str] = Field(default_factory=list)
    outputs: List[str] = Field(default_factory=list)
    states: List[StateDoc] = Field(default_factory=list)
    trans: List[TransDoc] = Field(default_factory=list)
    root: Optional[int] = None


def outcome_doc(x: Outcome, p: Fraction) -> OutcomeDoc:
    prob = print_rat(p)
    if isinstance(x, Accept):
        return OutcomeDoc(kind="accept", prob=prob)
    if isinstance(x, Reject):
        return OutcomeDoc(kind="reject", prob=prob)
    if isinstance(x, Ret):
        return OutcomeDoc(kind="return", value=x.name, prob=prob)
    target = x.target if isinstance(x.target, int) else target_text(x.target)
    return OutcomeDoc(kind="step", value=StepValue(action=x.action, target=target), prob=prob)


def dist_docs(nu: Dist) -> List[OutcomeDoc]:
    return [outcome_doc(x, p) for x, p in nu.items()]


def to_doc(aut: Automaton, root: Optional[int] = None) -> AutomatonDoc:
    return AutomatonDoc(
        tests=list(aut.alphabet.tests),
        atoms=[atom.label() for atom in aut.atoms],
        actions=list(aut.alphabet.actions),
        outputs=list(aut.alphabet.outputs),
        states=[StateDoc(id=x, descr=aut.descr_text(x)) for x in aut.states()],
        trans=[
            TransDoc(state=x, atom=i, dist=dist_docs(nu))
            for x, row in enumerate(aut.trans)
            for i, nu in enumerate(row)
        ],
        root=root,
    )


def to_json(aut: Automaton, root: Optional[int] = None, indent: Optional[int] = 2) -> str:
    return to_doc(aut, root).model_dump_json(indent=indent)


def _outcome(doc: OutcomeDoc) -> Tuple[Outcome, Fraction]:
    try:
        p = Fraction(doc.prob)
    except (ValueError, ZeroDivisionError) as exc:
        raise ProbabilityError(f"bad probability {doc.prob!r}") from exc
    if doc.kind == "accept":
        return ACCEPT, p
    if doc.kind == "reject":
        return REJECT, p
    if doc.kind == "return":
        if not isinstance(doc.value, str):
            raise AlphabetError("return outcome needs an output name")
        return Ret(doc.value), p
    if not isinstance(doc.value, StepValue) or not isinstance(doc.value.target, int):
        raise AlphabetError("step outcome needs an action and an integer target")
    return Step(doc.value.action, doc.value.target), p


def from_doc(doc: AutomatonDoc) -> Tuple[Automaton, Optional[int]]:
    """Automaton with opaque descriptors from a document; checks totality and masses."""
    alphabet = Alphabet(tuple(doc.tests), tuple(doc.actions), tuple(doc.outputs))
    atoms = enumerate_atoms(alphabet)
    if doc.atoms and doc.atoms != [atom.label() for atom in atoms]:
        raise AlphabetError("atom list does not match the declared tests")
    ids = [s.id for s in doc.states]
    if ids != list(range(len(ids))):
        raise AlphabetError("state ids must be 0..n-1 in order")
    rows: Dict[int, Dict[int, Dist]] = {x: {} for x in ids}
    for t in doc.trans:
        if t.state not in rows or not 0 <= t.atom < len(atoms):
            raise AlphabetError(f"transition for unknown state/atom ({t.state}, {t.atom})")
        entries: Dict[Outcome, Fraction] = {}
        for od in t.dist:
            x, p = _outcome(od)
            entries[x] = entries.get(x, Fraction(0)) + p
        try:
            rows[t.state][t.atom] = Dist(entries)
        except InvariantViolation as exc:
            raise ProbabilityError(f"state {t.state} atom {t.atom}: {exc}") from exc
    trans = []
    for x in ids:
        if len(rows[x]) != len(atoms):
            raise AlphabetError(f"state {x} lacks a transition for some atom")
        trans.append([rows[x][i] for i in range(len(atoms))])
    aut = Automaton(alphabet, atoms, [s.descr for s in doc.states], trans)
    try:
        aut.validate()
    except InvariantViolation as exc:
        raise AlphabetError(str(exc)) from exc
    for row in aut.trans:
        for nu in row:
            for x in nu:
                if isinstance(x, Step) and x.action not in alphabet.actions:
                    raise AlphabetError(f"undeclared action {x.action!r}")
                if isinstance(x, Ret) and x.name not in alphabet.outputs:
                    raise AlphabetError(f"undeclared output {x.name!r}")
    if doc.root is not None:
        aut.check_state(doc.root)
    return aut, doc.root


def from_json(text: str) -> Tuple[Automaton, Optional[int]]:
    try:
        doc = AutomatonDoc.model_validate_json(text)
    except ValidationError as exc:
        raise ParseError(f"invalid automaton document: {exc.error_count()} error(s), first: {exc.errors()[0]['msg']}") from exc
    return from_doc(doc)


def to_dot(aut: Automaton, root: Optional[int] = None, name: str = "automaton") -> str:
    """DOT source: solid atom edges into distribution points, dashed `action | prob` edges
    to states, double-headed edges to ✓, ✗ and outputs."""
    dot = Digraph(name=name)
    dot.attr(rankdir="LR")
    for x in aut.states():
        dot.node(f"s{x}", label=aut.descr_text(x), shape="circle", peripheries="2" if x == root else "1")
    terminals: Dict[str, str] = {}

    def terminal(label: str) -> str:
        if label not in terminals:
            terminals[label] = f"t{len(terminals)}"
            dot.node(terminals[label], label=label, shape="plaintext")
        return terminals[label]

    for x, row in enumerate(aut.trans):
        groups: Dict[Dist, List[int]] = {}
        for i, nu in enumerate(row):
            groups.setdefault(nu, []).append(i)
        for k, (nu, indices) in enumerate(groups.items()):
            labels = " ".join(str(aut.atoms[i]) for i in indices)
            if len(nu) == 1 and not isinstance(next(iter(nu)), Step):
                # sure observable: draw directly from the state
                dot.edge(f"s{x}", terminal(str(next(iter(nu)))), label=labels, arrowhead="normalnormal")
                continue
            mid = f"d{x}_{k}"
            dot.node(mid, label="", shape="point")
            dot.edge(f"s{x}", mid, label=labels)
            for y, p in nu.items():
                if isinstance(y, Step):
                    dot.edge(mid, f"s{y.target}", label=f"{y.action} | {print_rat(p)}", style="dashed")
                else:
                    dot.edge(mid, terminal(str(y)), label=print_rat(p), style="dashed", arrowhead="normalnormal")
    return dot.source


def dist_json(nu: Dist) -> List[Dict[str, Any]]:
    return [d.model_dump() for d in dist_docs(nu)]
