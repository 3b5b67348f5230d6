import time
from fractions import Fraction

import pytest

from probgkat.equivalence import (
    Partition,
    bisimilar,
    build_network,
    check_bisimulation_flow,
    coarsest_partition,
    decide_bisim,
    encode_coalgebraic,
    encoded_doc,
    format_distance,
    minimize,
    phi_step,
    pseudometric,
    refinement_chain,
    refinement_levels,
)
from probgkat.equivalence.flow import pair_respects
from probgkat.errors import AlphabetError
from probgkat.semantics import build_automaton, expand, from_json, is_homomorphism, merge_automata
from probgkat.syntax import ONE, Act, Alphabet, GuardedChoice, GuardedLoop, One, Prim, ProbChoice, ProbLoop, Seq, parse_program

from .generators import ALPHABET, random_automaton, random_expr, random_prob, random_test

p, q = Act("p"), Act("q")
PQ = Alphabet(actions=("p", "q"))
half = Fraction(1, 2)


def _pair(e, f, alphabet=PQ):
    a1, x = build_automaton(e, alphabet)
    a2, y = build_automaton(f, alphabet)
    merged, _, remap = merge_automata(a1, a2)
    return merged, x, remap[y]


def test_partition_helpers() -> None:
    part = Partition.from_keys(["a", "b", "a"])
    assert part.block_of == (0, 1, 0)
    assert part.blocks == [[0, 2], [1]]
    assert part.pairs() == {(0, 0), (0, 2), (2, 0), (2, 2), (1, 1)}
    assert Partition.from_relation(3, part.pairs()) == part
    assert Partition.from_relation(2, {(0, 0), (0, 1), (1, 1)}) is None


def test_die_programs_are_bisimilar(data_dir) -> None:
    alphabet, direct = parse_program((data_dir / "programs" / "die_direct.pk").read_text())
    _, loop = parse_program((data_dir / "programs" / "die_knuthyao.pk").read_text())
    assert bisimilar(loop, direct, alphabet)


def test_distinct_actions_are_not_bisimilar() -> None:
    merged, x, y = _pair(p, q)
    same, partition = decide_bisim(merged, x, y)
    assert not same
    assert partition.n_blocks == 3


def test_loop_unrolling_is_bisimilar() -> None:
    loop = ProbLoop(p, half)
    assert bisimilar(loop, ProbChoice(Seq(p, loop), half, ONE), PQ)


CONTEXTS = {
    "seq-left": lambda x, g, b, r: Seq(x, g),
    "seq-right": lambda x, g, b, r: Seq(g, x),
    "guarded-choice": lambda x, g, b, r: GuardedChoice(x, b, g),
    "prob-choice": lambda x, g, b, r: ProbChoice(g, r, x),
    "while": lambda x, g, b, r: GuardedLoop(x, b),
    "prob-loop": lambda x, g, b, r: ProbLoop(x, r),
}


@pytest.mark.parametrize("context", CONTEXTS)
def test_bisimilarity_is_a_congruence(context: str, rng) -> None:
    plug = CONTEXTS[context]
    for _ in range(40):
        e = random_expr(rng, ALPHABET, depth=2)
        g, b, r = random_expr(rng, ALPHABET, depth=2), random_test(rng), random_prob(rng)
        for f in (expand(e, ALPHABET), ProbChoice(e, r, e)):
            merged, x, y = _pair(e, f, ALPHABET)
            assert decide_bisim(merged, x, y)[0]
            merged, x, y = _pair(plug(e, g, b, r), plug(f, g, b, r), ALPHABET)
            assert decide_bisim(merged, x, y)[0], context


def test_refinement_levels_start_full() -> None:
    merged, x, y = _pair(Seq(p, p), Seq(p, q))
    levels = refinement_levels(merged)
    assert levels[0].n_blocks == 1
    assert levels[1].same(x, y)
    assert not levels[2].same(x, y)


def test_pseudometric_values() -> None:
    merged, x, y = _pair(p, q)
    assert pseudometric(merged, x, y) == 1
    merged, x, y = _pair(Seq(p, p), Seq(p, q))
    assert pseudometric(merged, x, y) == half
    assert pseudometric(merged, x, x) == 0
    assert format_distance(half) == "1/2^1"
    assert format_distance(Fraction(1, 8)) == "1/2^3"
    with pytest.raises(ValueError):
        format_distance(Fraction(1, 3))


def test_pseudometric_is_an_ultrametric(rng) -> None:
    for _ in range(100):
        aut = random_automaton(rng)
        levels = refinement_levels(aut)
        for _ in range(10):
            x, y, z = (rng.randrange(aut.n_states) for _ in range(3))
            d = lambda a, b: pseudometric(aut, a, b, levels)  # noqa: E731
            assert d(x, y) == d(y, x)
            assert d(x, z) <= max(d(x, y), d(y, z))


def test_zero_distance_is_bisimilarity(rng) -> None:
    for _ in range(100):
        aut = random_automaton(rng)
        levels = refinement_levels(aut)
        partition = levels[-1]
        for x in aut.states():
            for y in aut.states():
                assert (pseudometric(aut, x, y, levels) == 0) == partition.same(x, y)


def test_flow_network_saturation() -> None:
    net = build_network({0: half, 1: half}, {2: half, 3: half}, {(0, 2), (1, 3)})
    assert net.saturates()
    net = build_network({0: half, 1: half}, {2: Fraction(1)}, {(0, 2)})
    assert not net.saturates()
    assert net.max_flow() == half


def test_flow_agrees_with_blocks(rng) -> None:
    for _ in range(50):
        aut = random_automaton(rng, max_states=6)
        partition = coarsest_partition(aut)
        assert refinement_chain(aut, aut.n_states + 2, "flow") == partition.pairs()
        assert refinement_chain(aut, aut.n_states + 2, "blocks") == partition.pairs()


def test_phi_step_on_non_equivalences() -> None:
    aut, _ = build_automaton(ProbChoice(p, half, q), PQ)
    with pytest.raises(ValueError):
        phi_step(aut, {(0, 1)}, method="blocks")
    assert phi_step(aut, {(0, 1)}) <= {(x, y) for x in aut.states() for y in aut.states()}


@pytest.mark.slow
def test_bisimilarity_is_a_flow_bisimulation(rng) -> None:
    for _ in range(200):
        aut = random_automaton(rng)
        pairs = coarsest_partition(aut).pairs()
        assert refinement_chain(aut, aut.n_states + 2, "blocks") == pairs
        assert check_bisimulation_flow(aut, aut, pairs)


@pytest.mark.slow
def test_refinement_scales(rng) -> None:
    timings = {}
    for n in (50, 100, 200, 300):
        aut = random_automaton(rng, n_states=n)
        start = time.perf_counter()
        decide_bisim(aut, 0, n - 1)
        timings[n] = time.perf_counter() - start
    assert timings[300] < 30
    # quartic growth from 50 to 300 states would be a factor of 1296
    assert timings[300] <= max(timings[50], 0.01) * 1296


def test_flow_rejects_a_bad_relation() -> None:
    merged, x, y = _pair(p, q)
    assert not check_bisimulation_flow(merged, merged, {(x, y)})
    with pytest.raises(ValueError):
        check_bisimulation_flow(merged, merged, {(0, 99)})


def test_flow_check_needs_matching_tests() -> None:
    plain, _ = build_automaton(p, PQ)
    tested, _ = build_automaton(p, Alphabet(tests=("t",), actions=("p", "q")))
    with pytest.raises(AlphabetError):
        check_bisimulation_flow(plain, tested, {(0, 0)})
    with pytest.raises(AlphabetError):
        pair_respects(plain, 0, tested, 0, {(0, 0)})


def test_minimize_is_a_homomorphism(rng) -> None:
    for _ in range(100):
        aut = random_automaton(rng)
        quotient, block_map = minimize(aut)
        assert quotient.n_states == coarsest_partition(aut).n_blocks
        assert is_homomorphism(block_map, aut, quotient)
        assert coarsest_partition(quotient).n_blocks == quotient.n_states


def test_loop_and_its_unfolding_share_a_block() -> None:
    alphabet = Alphabet(tests=("t",), actions=("p",))
    loop = GuardedLoop(p, Prim("t"))
    aut, root = build_automaton(loop, alphabet)
    quotient, block_map = minimize(aut)
    assert quotient.n_states == 1
    assert block_map[root] == 0


def test_two_state_encoding(data_dir) -> None:
    aut, _ = from_json((data_dir / "automata" / "two_state.json").read_text())
    g = encode_coalgebraic(aut)
    assert (g.node_count, g.edge_count) == (9, 11)
    assert g.literal_bounds() == (10, 16)
    assert g.literal_bounds_hold() and g.atom_bounds_hold()
    doc = encoded_doc(g)
    assert doc.observable_keys == ["✗", "✓", "v"]
    assert doc.observables["d2"] == ["0", "1", "0"]


def test_encoding_within_bounds(rng) -> None:
    for _ in range(100):
        g = encode_coalgebraic(random_automaton(rng))
        assert g.atom_bounds_hold()


def test_empty_tests_single_atom() -> None:
    aut, _ = build_automaton(Act("p"), PQ)
    assert aut.atoms[0].as_test() == One()
