"""Exact excursion-operator and twisted-trace calculus on character stacks.

Character stacks of finitely presented groups with values in finite
groups, their fixed-point stacks under an endomorphism, excursion
operators, Hecke (T) and excursion (S) operators on trace spaces, partial
Frobenius operators, and zeroth Hochschild homology of groupoid algebras,
all over cyclotomic fields with exact arithmetic.
"""

from .cyclo import (
    CycContext,
    CycNumber,
    cyc_add,
    cyc_conj,
    cyc_inv,
    cyc_mul,
    cyc_neg,
    make_context,
    parse_cyclotomic,
)
from .excursion import (
    ExcursionDatum,
    ExcursionFunction,
    XiDatum,
    evaluate_excursion,
    excursion_algebra_span,
    xi_from_rep,
    xi_star,
)
from .groups import (
    Endomorphism,
    FinGroup,
    Presentation,
    conjugacy_classes,
    conjugation_orbits,
    enumerate_homs,
    evaluate_word,
    group_from_permutations,
    mapping_torus,
    parse_cycles,
    parse_word,
    validate_phi,
)
from .homology import (
    Bimodule,
    FinDimAlgebra,
    HHSpace,
    ProjectiveModuleData,
    bimodule_tensor,
    cyclicity_iso,
    groupoid_algebra,
    hattori_stallings,
    hh0,
    pullback_bimodule,
    semisimplicity_guard,
    trace_of_bimodule_endo,
    twist_bimodule,
)
from .linalg import (
    FieldMatrix,
    mat_add,
    mat_kron,
    mat_mul,
    mat_trace,
    rank_kernel,
    solve_linear,
)
from .reps import (
    Character,
    Representation,
    builtin_rep,
    character_of,
    direct_sum,
    dual,
    inner_product,
    invariant_basis,
    rep_from_generator_matrices,
    restrict_along,
    tensor,
)
from .scenario_io import builtin_scenarios, load_scenario
from .shtuka import (
    REGULAR,
    BundleModel,
    OperatorMatrix,
    Regular,
    Scenario,
    S_operator,
    T_operator,
    chern_check,
    excursion_action_check,
    hecke_bimodule,
    legged_space,
    partial_frobenius,
    trace_space,
    verify_frobenius_product,
    verify_S_equals_T,
)
from .stacks import (
    CharGroupoid,
    EquivariantBundle,
    FixedGroupoid,
    SectionSpace,
    build_char_groupoid,
    bundle_from_rep,
    fixed_groupoid_pairs,
    fixed_groupoid_torus,
    match_fixed_descriptions,
    monodromy,
    sections,
)

__version__ = "0.1.0"
