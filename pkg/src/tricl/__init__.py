"""Exact computation of divisor class groups of trinomial varieties.

The library computes divisor class groups, total-coordinate-space data,
iteration chains of Cox rings, and the associated surface correspondences
for trinomial varieties, in exact integer arithmetic.  Every closed-form
group computation can be cross-checked against an independent Smith normal
form presentation.
"""

from .errors import (
    DuplicateThetaError,
    EmptyBlockError,
    FactorialInputError,
    FreeVariablesPresentError,
    InvalidVarietyError,
    IterationNotAdmittedError,
    NonPositiveExponentError,
    NotAdjustedError,
    NotHyperplatonicError,
    NotRationalError,
    OracleMismatchError,
    TriclError,
)
from .exactlinalg import (
    TRIVIAL_GROUP,
    FgAbelianGroup,
    IntMatrix,
    SmithData,
    block_diagonal,
    canonical_group,
    cokernel,
    determinantal_divisor,
    element_order_in_cokernel,
    hermite_basis,
    is_saturated_sublattice,
    matrix_A,
    matrix_B,
    smith_invariants,
    smith_with_transforms,
)
from .variety import (
    AdjustmentRecord,
    BlockInvariants,
    component_counts,
    RationalityClass,
    RationalityKind,
    TrinomialVariety,
    adjust,
    block_invariants,
    dimension,
    exponent_matrix,
    is_adjusted,
    rationality_class,
    render_relations,
    validate,
)
from .coxring import (
    CoxConstruction,
    DuvalDiagram,
    IterationChain,
    IterationStep,
    PlatonicTriple,
    basic_platonic_triple,
    duval_diagram,
    duval_surface,
    is_hyperplatonic,
    iterate_cox_rings,
    p1_matrix,
    total_coordinate_space,
)
from .classgroup import (
    NOT_FINITELY_GENERATED,
    ClassGroupPredicates,
    ClassGroupReport,
    GroupMethod,
    IsolatedSingularityCase,
    IsolatedSingularityReport,
    NotFinitelyGenerated,
    class_group_formula,
    class_group_report,
    class_group_snf,
    compulsory_torsion,
    cyclic_subgroup_order,
    grading_matrix,
    isolated_singularity_report,
    n_tilde,
    predicates,
    rank_formula,
    relation_degree_order,
)
from .type1 import (
    Type1Variety,
    adjust_type1,
    class_group_type1,
    is_adjusted_type1,
    lift_to_type2,
    type1_n_tilde,
    validate_type1,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
