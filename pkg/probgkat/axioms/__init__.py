from .proof import (
    AxiomStep,
    BoolStep,
    Cong,
    Hole,
    ProofLine,
    ProofReport,
    ProofScript,
    Refl,
    Sym,
    Trans,
    UAStep,
    ba_equal,
    check_proof,
    plug,
)
from .script import ScriptParser, parse_script, parse_solution_map, parse_system_file
from .systems import (
    Closed,
    Convex,
    Guarded,
    Prefixed,
    SalomaaSystem,
    apply_system,
    check_solution,
    is_salomaa,
    print_system,
    substitute,
    system_of_automaton,
)
from .table import EQUATIONAL, QUASI_EQUATIONAL, RULES, AxiomId, instantiate_axiom, parse_axiom_id, premises
