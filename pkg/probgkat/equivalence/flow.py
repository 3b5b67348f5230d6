from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Hashable, Iterable, Set, Tuple

import networkx as nx
from networkx.algorithms.flow import edmonds_karp

from probgkat.semantics.automaton import Automaton
from probgkat.utils.logger import logger

PairRelation = Set[Tuple[int, int]]

SOURCE = ("source",)
SINK = ("sink",)


@dataclass
class FlowNetwork:
    graph: nx.DiGraph
    source: Hashable
    sink: Hashable
    sentinel: Fraction

    def source_capacity(self) -> Fraction:
        return sum((d["capacity"] for _, _, d in self.graph.out_edges(self.source, data=True)), Fraction(0))

    def sink_capacity(self) -> Fraction:
        return sum((d["capacity"] for _, _, d in self.graph.in_edges(self.sink, data=True)), Fraction(0))

    def max_flow(self) -> Fraction:
        if self.graph.out_degree(self.source) == 0 or self.graph.in_degree(self.sink) == 0:
            return Fraction(0)
        return Fraction(nx.maximum_flow_value(self.graph, self.source, self.sink, flow_func=edmonds_karp))

    def saturates(self) -> bool:
        out, into = self.source_capacity(), self.sink_capacity()
        if out != into:
            return False
        if out == 0:
            return True
        return self.max_flow() == out


def action_masses(aut: Automaton, x: int, i: int, action: str) -> Dict[int, Fraction]:
    out: Dict[int, Fraction] = {}
    for step, p in aut.trans[x][i].steps():
        if step.action == action:
            out[step.target] = out.get(step.target, Fraction(0)) + p
    return out


def build_network(left: Dict[int, Fraction], right: Dict[int, Fraction], relation: Iterable[Tuple[int, int]]) -> FlowNetwork:
    """source -> left successors -> (related) right successors -> sink.

    Left and right nodes are tagged so both sides stay disjoint even over one automaton.
    """
    g = nx.DiGraph()
    g.add_node(SOURCE)
    g.add_node(SINK)
    for x, p in left.items():
        g.add_edge(SOURCE, ("L", x), capacity=p)
    for y, p in right.items():
        g.add_edge(("R", y), SINK, capacity=p)
    sentinel = sum(left.values(), Fraction(0)) + sum(right.values(), Fraction(0)) + 1
    for x, y in relation:
        if x in left and y in right:
            g.add_edge(("L", x), ("R", y), capacity=sentinel)
    return FlowNetwork(g, SOURCE, SINK, sentinel)


def pair_respects(a1: Automaton, x: int, a2: Automaton, y: int, relation: PairRelation) -> bool:
    """Whether (x, y) satisfies the transfer conditions against relation at every atom."""
    actions = a1.alphabet.union(a2.alphabet).actions
    atom_map = [a2.alphabet.atom_index(atom) for atom in a1.atoms]
    for i, j in enumerate(atom_map):
        nu, mu = a1.trans[x][i], a2.trans[y][j]
        if nu.observables() != mu.observables():
            return False
        for action in actions:
            left = action_masses(a1, x, i, action)
            right = action_masses(a2, y, j, action)
            if not left and not right:
                continue
            if not build_network(left, right, relation).saturates():
                return False
    return True


def check_bisimulation_flow(a1: Automaton, a2: Automaton, relation: Iterable[Tuple[int, int]]) -> bool:
    a1.alphabet.union(a2.alphabet)  # AlphabetError on differing tests
    pairs = set(relation)
    for x, y in pairs:
        a1.check_state(x)
        a2.check_state(y)
    for x, y in sorted(pairs):
        if not pair_respects(a1, x, a2, y, pairs):
            logger.debug("Flow check failed at pair ({x}, {y})", x=x, y=y)
            return False
    return True
