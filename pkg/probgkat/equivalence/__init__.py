from .encoding import EncodedGraph, encode_coalgebraic, encoded_doc
from .flow import FlowNetwork, build_network, check_bisimulation_flow
from .metric import format_distance, pseudometric, vector_distance
from .refinement import (
    Partition,
    bisimilar,
    coarsest_partition,
    decide_bisim,
    minimize,
    phi_step,
    refinement_chain,
    refinement_levels,
)
