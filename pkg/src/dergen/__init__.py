"""Generic-triviality analysis for bounded-quiver algebras.

Parse a presentation, classify it (special biserial / gentle / string,
cycle structure, relation balance, Dynkin recognition), decide whether the
unbounded derived category is generically trivial, and, in the gentle
one-cycle unbalanced case, construct the periodic infinite string over the
doubled quiver together with its exact string-module matrices.
"""

from .classify import (
    BiserialReport,
    ClockCounts,
    DiscreteResult,
    Equivalents,
    GraphStats,
    SupportBounds,
    TrivialityDecision,
    classify_biserial,
    clock_counts,
    decide_generic_triviality,
    dynkin_type,
    has_relation_full_cycle,
    is_derived_discrete,
    support_bounds,
    underlying_graph_stats,
)
from .errors import ClockCycleError, InfeasibleError, PreconditionError, WitnessBudgetError
from .presentation import (
    Arrow,
    BudgetExceededError,
    ParseError,
    Presentation,
    Quiver,
    StructureError,
    ValidationReport,
    export,
    parse_presentation,
    permitted_paths,
    validate_presentation,
)
from .randomgen import generate_random_gentle
from .repetitive import (
    LArrow,
    MaximalPath,
    RepetitiveWindow,
    build_repetitive_window,
    check_expanded_gentle,
    maximal_paths,
    shift,
    window_dot,
    window_json,
)
from .strings import (
    Letter,
    LocalFinitenessReport,
    PeriodicModule,
    PeriodicString,
    StringModule,
    Witness,
    Word,
    build_witness_string,
    direct_sum,
    enumerate_strings,
    hom_basis,
    is_indecomposable,
    local_finiteness_check,
    parse_word,
    periodic_string_module,
    string_module,
    trivial_string_module,
    truncation_module,
    validate_string,
    witness_json,
)

__version__ = "0.1.0"
