from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Hashable, Iterable, List, Literal, Optional, Sequence, Set, Tuple

from probgkat.prob import Dist
from probgkat.semantics.automaton import Automaton, build_automaton, merge_automata
from probgkat.syntax.ast import Expr
from probgkat.syntax.atoms import Alphabet
from probgkat.utils.logger import logger

from .flow import PairRelation, pair_respects


@dataclass(frozen=True)
class Partition:
    """block_of[x] is the block of state x; blocks are numbered by their least member."""

    block_of: Tuple[int, ...]

    @classmethod
    def from_keys(cls, keys: Sequence[Hashable]) -> "Partition":
        ids: Dict[Hashable, int] = {}
        return cls(tuple(ids.setdefault(k, len(ids)) for k in keys))

    @classmethod
    def full(cls, n: int) -> "Partition":
        return cls((0,) * n)

    @classmethod
    def from_relation(cls, n: int, relation: PairRelation) -> Optional["Partition"]:
        """The partition whose kernel is relation, or None if relation is not an equivalence."""
        classes = [frozenset(y for y in range(n) if (x, y) in relation) for x in range(n)]
        for x in range(n):
            if x not in classes[x] or any(classes[y] != classes[x] for y in classes[x]):
                return None
        return cls.from_keys(classes)

    @property
    def n_blocks(self) -> int:
        return max(self.block_of, default=-1) + 1

    @property
    def blocks(self) -> List[List[int]]:
        out: List[List[int]] = [[] for _ in range(self.n_blocks)]
        for x, b in enumerate(self.block_of):
            out[b].append(x)
        return out

    def same(self, x: int, y: int) -> bool:
        return self.block_of[x] == self.block_of[y]

    def pairs(self) -> Set[Tuple[int, int]]:
        return {(x, y) for block in self.blocks for x in block for y in block}


def _signature(row: Sequence[Dist], block_of: Sequence[int]) -> tuple:
    sig = []
    for nu in row:
        masses: Dict[Tuple[str, int], Fraction] = {}
        for step, p in nu.steps():
            key = (step.action, block_of[step.target])
            masses[key] = masses.get(key, Fraction(0)) + p
        sig.append((tuple(nu.observables().items()), frozenset(masses.items())))
    return tuple(sig)


def refine(aut: Automaton, partition: Partition) -> Partition:
    return Partition.from_keys([_signature(row, partition.block_of) for row in aut.trans])


def refinement_levels(aut: Automaton, max_levels: Optional[int] = None) -> List[Partition]:
    """Partitions of the chain from the full relation until it stabilizes (last entry is bisimilarity)."""
    levels = [Partition.full(aut.n_states)]
    while max_levels is None or len(levels) < max_levels:
        nxt = refine(aut, levels[-1])
        if nxt == levels[-1]:
            break
        levels.append(nxt)
        logger.debug("Refinement round={i} blocks={b}", i=len(levels) - 1, b=nxt.n_blocks)
    return levels


def coarsest_partition(aut: Automaton) -> Partition:
    return refinement_levels(aut)[-1]


def decide_bisim(aut: Automaton, x: int, y: int) -> Tuple[bool, Partition]:
    aut.check_state(x)
    aut.check_state(y)
    partition = coarsest_partition(aut)
    logger.info(
        "Bisimilarity states={n} blocks={b} verdict={v}",
        n=aut.n_states,
        b=partition.n_blocks,
        v=partition.same(x, y),
    )
    return partition.same(x, y), partition


def phi_step(
    aut: Automaton,
    relation: Iterable[Tuple[int, int]],
    method: Literal["auto", "blocks", "flow"] = "auto",
) -> Set[Tuple[int, int]]:
    """The relation transformer whose greatest fixpoint is bisimilarity.

    Equivalences go through block masses; other relations through the flow check.
    """
    rel = set(relation)
    if method != "flow":
        partition = Partition.from_relation(aut.n_states, rel)
        if partition is not None:
            return refine(aut, partition).pairs()
        if method == "blocks":
            raise ValueError("block-mass refinement needs an equivalence relation")
    return {(x, y) for x in aut.states() for y in aut.states() if pair_respects(aut, x, aut, y, rel)}


def refinement_chain(aut: Automaton, i: int, method: Literal["auto", "blocks", "flow"] = "auto") -> Set[Tuple[int, int]]:
    rel = {(x, y) for x in aut.states() for y in aut.states()}
    for _ in range(i):
        nxt = phi_step(aut, rel, method)
        if nxt == rel:
            break
        rel = nxt
    return rel


def minimize(aut: Automaton, partition: Optional[Partition] = None) -> Tuple[Automaton, Dict[int, int]]:
    """Quotient by bisimilarity; a block moves like any of its members, pushed onto blocks."""
    partition = partition or coarsest_partition(aut)
    blocks = partition.blocks
    block_map = {x: b for x, b in enumerate(partition.block_of)}
    trans = [[nu.map_targets(block_map.__getitem__) for nu in aut.trans[block[0]]] for block in blocks]
    descriptors = [aut.descr_text(block[0]) for block in blocks]
    quotient = Automaton(aut.alphabet, aut.atoms, descriptors, trans)
    logger.debug("Minimized states={n} blocks={b}", n=aut.n_states, b=len(blocks))
    return quotient, block_map


def bisimilar(e: Expr, f: Expr, alphabet: Alphabet) -> bool:
    a1, x = build_automaton(e, alphabet)
    a2, y = build_automaton(f, alphabet)
    merged, _, remap = merge_automata(a1, a2)
    same, _ = decide_bisim(merged, x, remap[y])
    return same
