from .automaton import (
    Automaton,
    StateTable,
    automaton_from_table,
    build_automata,
    build_automaton,
    is_homomorphism,
    merge_automata,
    reachable,
)
from .derivative import derivative, seq_adjust, size_bound, termination
from .expand import convex_sum, dist_expr, expand, guarded_sum
from .export import from_json, to_dot, to_json
