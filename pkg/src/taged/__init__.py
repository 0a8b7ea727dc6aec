"""Tree automata with global equality/disequality constraints, and the
reduction from Hamiltonian path to emptiness of TAGED(0,1)."""

from .automata import (
    Rule,
    Run,
    TreeAutomaton,
    accepts,
    enumerate_language,
    enumerate_runs,
    is_empty,
    product,
    reachable_states,
    to_unique_final,
    trim,
)
from .constraints import Taged, constraint_class, taged_accepts, taged_empty_bounded, taged_witness_run
from .errors import (
    AlienSymbolError,
    AlphabetMismatchError,
    InvalidPositionError,
    ParseError,
    PreconditionError,
    ResourceLimitError,
    TagedError,
    UnknownVertexError,
)
from .graphs import (
    Digraph,
    count_full_walks,
    count_hamiltonian_paths,
    enumerate_full_walks,
    has_hamiltonian_path,
)
from .reduction import (
    Limits,
    ReductionBundle,
    build_a_m,
    build_b_g,
    build_c_g,
    build_d_g,
    build_p_g,
    decide,
    reduce_and_decide,
    verify_constructions,
)
from .terms import (
    RankedAlphabet,
    Symbol,
    Term,
    comb_decode,
    comb_encode,
    count_leaves,
    parse_term,
    positions,
    replace_at,
    subterm_at,
)

__version__ = "0.1.0"
