"""Flow-equivalence invariants of sofic shifts computed from labeled-graph presentations."""

from .covers import (
    LabeledPreorder,
    PointedAction,
    Poset,
    cyclic_poset,
    dclass_labeled_preorder,
    decide_action_equivalence,
    element_rank,
    fischer_cover,
    karoubi_action,
    krieger_cover,
    labeled_preorder_isomorphic,
    proper_communication_graph,
)
from .errors import (
    BoundTooSmall,
    BudgetExceeded,
    EmptyShift,
    GensDoNotGenerate,
    LetterCollision,
    LetterNotInAlphabet,
    NotAPreorder,
    NotIrreducible,
    NotProlongable,
    NotRightResolving,
    ParseError,
    SoficError,
)
from .invariants import (
    ComparisonVerdict,
    InvariantReport,
    analyze,
    classify_shift,
    compare_shifts,
    property_a,
    subsynchronizing_poset,
)
from .karoubi import (
    ZeroCategory,
    decide_equivalence,
    divisor_subcategories,
    is_snzd_preorder,
    karoubi_envelope,
    krieger_semigroup,
    morphism_iso_classes,
    skeleton,
)
from .presentation import (
    Dfa,
    Presentation,
    ShiftHandle,
    higher_block,
    higher_power,
    induced_shift,
    load_presentation,
    minimal_automaton,
    symbol_expansion,
)
from .semigroup import (
    FinSemigroupZ,
    GreenStructure,
    GroupTable,
    brandt_semigroup,
    context_oracle,
    green_structure,
    local_monoids_and_lu,
    semigroup_predicates,
    shift_semigroup,
    synchronizing_and_magic,
    transition_semigroup,
)

__version__ = "0.1.0"
