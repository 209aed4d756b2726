"""Fibonacci-anyon braid compiler: GA-enhanced Solovay-Kitaev with
brute-force, meet-in-the-middle, and Monte-Carlo baselines."""

from .braids import (
    PHI,
    GateTarget,
    Generator,
    distance_phase_invariant,
    distance_quaternion,
    evaluate,
    evaluate_many,
    format_word,
    generator_matrix,
    inverse_word,
    parse_word,
    simplify,
    standard_gate,
    to_quaternion,
    to_su2,
)
from .ga import GaConfig, GaRunReport, Individual, ga_search
from .baselines import (
    BudgetExceededError,
    EnumerationTable,
    McConfig,
    SearchReport,
    brute_force,
    build_enumeration_table,
    load_or_build_table,
    mc_anneal,
    mitm_search,
    table_cache_path,
)
from .sk import (
    BfEngine,
    ExactEngine,
    GaEngine,
    GcDecomposeError,
    GcPair,
    McEngine,
    MitmEngine,
    SkConfig,
    SkResult,
    gc_decompose,
    recursion_cost,
    solovay_kitaev,
)

__version__ = "0.1.0"

__all__ = [
    "PHI",
    "GateTarget",
    "Generator",
    "distance_phase_invariant",
    "distance_quaternion",
    "evaluate",
    "evaluate_many",
    "format_word",
    "generator_matrix",
    "inverse_word",
    "parse_word",
    "simplify",
    "standard_gate",
    "to_quaternion",
    "to_su2",
    "GaConfig",
    "GaRunReport",
    "Individual",
    "ga_search",
    "BudgetExceededError",
    "EnumerationTable",
    "McConfig",
    "SearchReport",
    "brute_force",
    "build_enumeration_table",
    "load_or_build_table",
    "mc_anneal",
    "mitm_search",
    "table_cache_path",
    "BfEngine",
    "ExactEngine",
    "GaEngine",
    "GcDecomposeError",
    "GcPair",
    "McEngine",
    "MitmEngine",
    "SkConfig",
    "SkResult",
    "gc_decompose",
    "recursion_cost",
    "solovay_kitaev",
    "__version__",
]
