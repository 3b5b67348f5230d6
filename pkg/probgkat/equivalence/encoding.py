"""Three-sorted graph encoding of an automaton; action-pair nodes carry no observables."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

from pydantic import BaseModel

from probgkat.prob import ACCEPT, REJECT, Dist, Ret
from probgkat.semantics.automaton import Automaton
from probgkat.syntax.printer import print_rat
from probgkat.utils.logger import logger

Node = Tuple[str, object]  # ("state", x) | ("dist", k) | ("act", (action, x))
Label = Union[str, Fraction]


@dataclass
class EncodedGraph:
    nodes: List[Node] = field(default_factory=list)
    edges: List[Tuple[Node, Label, Node]] = field(default_factory=list)
    observables: Dict[Node, Optional[Tuple[Fraction, ...]]] = field(default_factory=dict)
    observable_keys: Tuple[str, ...] = ()
    n_states: int = 0
    n_dists: int = 0
    n_action_pairs: int = 0
    n_atoms: int = 0
    n_actions: int = 0

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def literal_bounds(self) -> Tuple[int, int]:
        q, a = self.n_states, self.n_actions
        return q + 2 * a * q, q * self.n_atoms + q * q * a + q * a

    def atom_bounds(self) -> Tuple[int, int]:
        """Bounds that also account for one distribution node per (state, atom)."""
        q, a, k = self.n_states, self.n_actions, self.n_atoms
        return q + q * k + a * q, q * k + q * k * q * a + q * a

    def literal_bounds_hold(self) -> bool:
        nodes, edges = self.literal_bounds()
        return self.node_count <= nodes and self.edge_count <= edges

    def atom_bounds_hold(self) -> bool:
        nodes, edges = self.atom_bounds()
        return self.node_count <= nodes and self.edge_count <= edges


def encode_coalgebraic(aut: Automaton) -> EncodedGraph:
    keys = ("✗", "✓") + aut.alphabet.outputs
    outcomes = [REJECT, ACCEPT] + [Ret(v) for v in aut.alphabet.outputs]
    g = EncodedGraph(
        observable_keys=keys,
        n_states=aut.n_states,
        n_atoms=len(aut.atoms),
        n_actions=len(aut.alphabet.actions),
    )
    for x in aut.states():
        node = ("state", x)
        g.nodes.append(node)
        g.observables[node] = None
    dist_ids: Dict[Dist, int] = {}
    for row in aut.trans:
        for nu in row:
            if nu not in dist_ids:
                dist_ids[nu] = len(dist_ids)
                node = ("dist", dist_ids[nu])
                g.nodes.append(node)
                g.observables[node] = tuple(nu(o) for o in outcomes)
    for action in aut.alphabet.actions:
        for x in aut.states():
            node = ("act", (action, x))
            g.nodes.append(node)
            g.observables[node] = None
            g.edges.append((node, action, ("state", x)))
    for x, row in enumerate(aut.trans):
        for atom, nu in zip(aut.atoms, row):
            d = ("dist", dist_ids[nu])
            g.edges.append((("state", x), atom.label(), d))
    for nu, k in dist_ids.items():
        for step, p in nu.steps():
            g.edges.append((("dist", k), p, ("act", (step.action, step.target))))
    g.n_dists = len(dist_ids)
    g.n_action_pairs = len(aut.alphabet.actions) * aut.n_states
    logger.debug(
        "Encoded automaton nodes={n} edges={m} distributions={d}",
        n=g.node_count,
        m=g.edge_count,
        d=g.n_dists,
    )
    return g


class EncodedGraphDoc(BaseModel):
    nodes: List[str]
    edges: List[Tuple[str, str, str]]
    observables: Dict[str, List[str]]
    observable_keys: List[str]
    node_count: int
    edge_count: int
    literal_bounds: Tuple[int, int]
    literal_bounds_hold: bool
    atom_bounds: Tuple[int, int]
    atom_bounds_hold: bool


def _node_name(node: Node) -> str:
    sort, payload = node
    if sort == "act":
        action, x = payload  # type: ignore[misc]
        return f"{action}@s{x}"
    return f"{'s' if sort == 'state' else 'd'}{payload}"


def encoded_doc(g: EncodedGraph) -> EncodedGraphDoc:
    return EncodedGraphDoc(
        nodes=[_node_name(n) for n in g.nodes],
        edges=[
            (_node_name(a), print_rat(label) if isinstance(label, Fraction) else label, _node_name(b))
            for a, label, b in g.edges
        ],
        observables={_node_name(n): [print_rat(p) for p in vec] for n, vec in g.observables.items() if vec is not None},
        observable_keys=list(g.observable_keys),
        node_count=g.node_count,
        edge_count=g.edge_count,
        literal_bounds=g.literal_bounds(),
        literal_bounds_hold=g.literal_bounds_hold(),
        atom_bounds=g.atom_bounds(),
        atom_bounds_hold=g.atom_bounds_hold(),
    )
