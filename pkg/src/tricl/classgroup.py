"""Divisor class groups of trinomial varieties, two independent ways.

The closed formulas split by the rationality case of the adjusted variety:

* factorial: the trivial group;
* case II (only gcd(L0, L1) = c > 1): (Z/L2)^(c-1) x ... x (Z/Lr)^(c-1) x Z^nt;
* case III (the three leading pairwise gcds all 2): Z/(L0 L1 L2 / 4) x
  (Z/L3)^3 x ... x (Z/Lr)^3 x Z^nt;
* otherwise the group is not finitely generated,

with nt = sum_i (c(i) - 1)(n_i - 1).  The independent route presents the
group as the cokernel of an explicit grading matrix over the total
coordinate space generators and reads it off a Smith normal form.  Both
routes are exposed and their agreement is the library's central invariant.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Union

from .coxring import CoxConstruction, total_coordinate_space
from .errors import (
    FactorialInputError,
    FreeVariablesPresentError,
    NotRationalError,
    OracleMismatchError,
)
from .exactlinalg import (
    TRIVIAL_GROUP,
    FgAbelianGroup,
    IntMatrix,
    block_diagonal,
    canonical_group,
    cokernel,
    element_order_in_cokernel,
    matrix_A,
)
from .variety import (
    RationalityClass,
    RationalityKind,
    TrinomialVariety,
    component_counts,
    dimension,
    exponent_matrix,
    rationality_class,
    require_adjusted,
)


class NotFinitelyGenerated:
    """Singleton marker value: the class group is not finitely generated.

    Returned (never raised) by the formula route; operations that need an
    actual group treat it as a precondition failure.
    """

    _instance: Optional["NotFinitelyGenerated"] = None

    def __new__(cls) -> "NotFinitelyGenerated":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "NotFinitelyGenerated"

    def __str__(self) -> str:
        return "not finitely generated"


NOT_FINITELY_GENERATED = NotFinitelyGenerated()

ClassGroup = Union[FgAbelianGroup, NotFinitelyGenerated]


def n_tilde(variety: TrinomialVariety) -> int:
    """Free rank sum((c(i) - 1) n_i - c(i) + 1) of an adjusted rational variety."""
    require_adjusted(variety)
    if variety.is_degenerate:
        return 0
    if not rationality_class(variety).is_rational:
        raise NotRationalError("the rank formula needs a rational variety")
    counts = component_counts(variety)
    return sum(
        (c - 1) * len(block) - c + 1 for c, block in zip(counts, variety.blocks)
    )


def class_group_formula(variety: TrinomialVariety) -> ClassGroup:
    """Divisor class group by the closed formulas, in canonical form.

    Degenerate data is an affine space with trivial group.  Non-rational
    input returns the NOT_FINITELY_GENERATED marker.
    """
    require_adjusted(variety)
    if variety.is_degenerate:
        return TRIVIAL_GROUP
    kind = rationality_class(variety)
    if kind.is_factorial:
        return TRIVIAL_GROUP
    gcds = variety.block_gcds()
    if kind.kind is RationalityKind.CASE_II:
        factors = [g for g in gcds[2:] for _ in range(kind.c - 1)]
        return canonical_group(factors, n_tilde(variety))
    if kind.kind is RationalityKind.CASE_III:
        factors = [gcds[0] * gcds[1] * gcds[2] // 4]
        factors += [g for g in gcds[3:] for _ in range(3)]
        return canonical_group(factors, n_tilde(variety))
    return NOT_FINITELY_GENERATED


def rank_formula(variety: TrinomialVariety) -> int:
    """Class group rank, asserted against dim(TCS) - dim(X)."""
    value = n_tilde(variety)
    cox = total_coordinate_space(variety)
    difference = dimension(cox.tcs) - dimension(variety)
    if value != difference:
        raise OracleMismatchError(
            f"rank formula {value} disagrees with the dimension difference {difference}"
        )
    return value


def _require_rational_nonfactorial(variety: TrinomialVariety) -> RationalityClass:
    require_adjusted(variety)
    if variety.is_degenerate:
        raise FactorialInputError("degenerate data is an affine space, hence factorial")
    kind = rationality_class(variety)
    if not kind.is_rational:
        raise NotRationalError("the class group is not finitely generated")
    if kind.is_factorial:
        raise FactorialInputError("the variety is factorial")
    return kind


def compulsory_torsion(variety: TrinomialVariety) -> FgAbelianGroup:
    """The forced finite subgroup of the class group, computed twice.

    Closed form: (Z/L2)^(c-1) x ... x (Z/Lr)^(c-1) in case II, and
    Z/(L0/2) x Z/(L1/2) x Z/(L2/2) x (Z/L3)^3 x ... in case III.  The second
    route takes the torsion part of the cokernel of the exponent matrix of
    the (raw) total coordinate space; disagreement raises
    OracleMismatchError.
    """
    kind = _require_rational_nonfactorial(variety)
    gcds = variety.block_gcds()
    if kind.kind is RationalityKind.CASE_II:
        closed = canonical_group([g for g in gcds[2:] for _ in range(kind.c - 1)])
    else:
        factors = [gcds[0] // 2, gcds[1] // 2, gcds[2] // 2]
        factors += [g for g in gcds[3:] for _ in range(3)]
        closed = canonical_group(factors)
    cox = total_coordinate_space(variety)
    from_snf = cokernel(exponent_matrix(cox.tcs)).torsion_part()
    if closed != from_snf:
        raise OracleMismatchError(
            f"compulsory torsion mismatch: closed form {closed}, "
            f"exponent-matrix cokernel {from_snf}\n{exponent_matrix(cox.tcs)}"
        )
    return closed


def _tcs_column_offset(cox: CoxConstruction) -> list[int]:
    """Start column of each source block in the (i, t, j) column layout."""
    offsets = []
    position = 0
    for i, copies in enumerate(cox.tcs_blocks):
        offsets.append(position)
        position += len(copies) * len(copies[0])
    return offsets


def grading_matrix(variety: TrinomialVariety) -> IntMatrix:
    """Relation rows presenting the class group on the TCS generators.

    Columns are indexed by (i, t, j): source block i, copy t, variable j,
    copies varying faster than blocks.  In case II the matrix is block
    diagonal with one relation block A(c(i), l_{i,1}) per source block.  In
    case III the rows are, for every (i, j), the sum of e_{ij,t} over t, and
    for every (i, t) != (0, 1) the difference of the monomial rows
    sum_j l_{ij,t} e_{ij,t} - sum_j l_{0j,1} e_{0j,1}.  The m free variables
    have degree zero and contribute no columns.
    """
    kind = _require_rational_nonfactorial(variety)
    cox = total_coordinate_space(variety)
    if kind.kind is RationalityKind.CASE_II:
        return block_diagonal(
            [matrix_A(cox.c[i], copies[0]) for i, copies in enumerate(cox.tcs_blocks)]
        )

    offsets = _tcs_column_offset(cox)

    def column(i: int, t: int, j: int) -> int:
        block_length = len(cox.tcs_blocks[i][0])
        return offsets[i] + (t - 1) * block_length + (j - 1)

    rows = []
    for i, copies in enumerate(cox.tcs_blocks):
        for j in range(1, len(copies[0]) + 1):
            row = [0] * cox.n_prime
            for t in range(1, len(copies) + 1):
                row[column(i, t, j)] = 1
            rows.append(row)
    base = cox.tcs_blocks[0][0]
    for i, copies in enumerate(cox.tcs_blocks):
        for t in range(1, len(copies) + 1):
            if (i, t) == (0, 1):
                continue
            row = [0] * cox.n_prime
            vector = copies[t - 1]
            for j in range(1, len(vector) + 1):
                row[column(i, t, j)] += vector[j - 1]
            for j in range(1, len(base) + 1):
                row[column(0, 1, j)] -= base[j - 1]
            rows.append(row)
    return IntMatrix.from_rows(rows, cox.n_prime)


def class_group_snf(variety: TrinomialVariety) -> FgAbelianGroup:
    """Divisor class group as the cokernel of the grading matrix."""
    return cokernel(grading_matrix(variety))


def _leading_block_vector(cox: CoxConstruction, exponents) -> list[int]:
    """Vector supported on the (0, 1, j) columns with the given entries."""
    vector = [0] * cox.n_prime
    for j, e in enumerate(exponents):
        vector[j] = e  # block 0, copy 1 occupies the first columns
    return vector


def relation_degree_order(variety: TrinomialVariety) -> int:
    """Order of the class of the leading relation monomial, 1 or 2.

    The image of sum_j l_{0j,1} e_{0j,1} in the class group presentation is
    trivial in case II and of order exactly 2 in case III; any other outcome
    raises OracleMismatchError.
    """
    kind = _require_rational_nonfactorial(variety)
    cox = total_coordinate_space(variety)
    matrix = grading_matrix(variety)
    vector = _leading_block_vector(cox, cox.tcs_blocks[0][0])
    order = element_order_in_cokernel(matrix, vector)
    expected = 1 if kind.kind is RationalityKind.CASE_II else 2
    if order != expected:
        raise OracleMismatchError(
            f"relation degree has order {order}, expected {expected}"
        )
    return order


def cyclic_subgroup_order(variety: TrinomialVariety, y: int) -> int:
    """Order of the class of sum_j (l_{0j}/y) D_{0j,1} for a case III variety.

    `y` must divide gcd(l_01, ..., l_0n0); the resulting order is exactly y,
    anything else raises OracleMismatchError.
    """
    kind = _require_rational_nonfactorial(variety)
    if kind.kind is not RationalityKind.CASE_III:
        raise ValueError("the cyclic subgroup construction needs a case III variety")
    frak_l0 = variety.block_gcds()[0]
    if y < 1 or frak_l0 % y:
        raise ValueError(f"y={y} does not divide the leading block gcd {frak_l0}")
    cox = total_coordinate_space(variety)
    matrix = grading_matrix(variety)
    vector = _leading_block_vector(cox, [e // y for e in variety.blocks[0]])
    order = element_order_in_cokernel(matrix, vector)
    if order != y:
        raise OracleMismatchError(f"cyclic subgroup has order {order}, expected {y}")
    return order


@dataclass(frozen=True)
class ClassGroupPredicates:
    """Shape predicates of the class group of an adjusted variety.

    ``cyclic`` holds the group itself when it is non-trivial finite cyclic.
    For non-rational input the group-dependent comparisons are skipped and
    all predicates are negative.
    """

    free_abelian: bool
    finite: bool
    cyclic: Optional[FgAbelianGroup]
    half_factorial: bool


def predicates(variety: TrinomialVariety) -> ClassGroupPredicates:
    """Evaluate the predicate corollaries twice and cross-check.

    Each predicate is decided from the block data alone and from the
    canonical form of the computed group; a disagreement raises
    OracleMismatchError.  Note the finite and cyclic criteria are per-block:
    the group is finite iff every block has c(i) = 1 or n_i = 1 (blocks whose
    vanishing set stays prime contribute no free part regardless of their
    size), and the torsion is cyclic in case II iff c = 2.
    """
    require_adjusted(variety)
    kind = rationality_class(variety)
    gcds = variety.block_gcds()
    descending = sorted(gcds, reverse=True)

    crit_free = kind.is_factorial or all(g == 1 for g in descending[2:])
    if kind.is_factorial:
        crit_finite = True
        crit_cyclic: Optional[FgAbelianGroup] = None
    elif not kind.is_rational:
        crit_finite = False
        crit_cyclic = None
    else:
        counts = component_counts(variety)
        zero_rank = all(
            c == 1 or len(block) == 1 for c, block in zip(counts, variety.blocks)
        )
        crit_finite = zero_rank
        crit_cyclic = None
        if zero_rank:
            if kind.kind is RationalityKind.CASE_II and kind.c == 2:
                product = math.prod(gcds[2:])
                if product > 1:
                    crit_cyclic = FgAbelianGroup(0, (product,))
            elif kind.kind is RationalityKind.CASE_III and all(g == 1 for g in gcds[3:]):
                crit_cyclic = FgAbelianGroup(0, (gcds[0] * gcds[1] * gcds[2] // 4,))
    crit_half = variety.blocks == ((2,), (2,), (2,))

    if kind.is_rational:
        group = class_group_formula(variety)
        assert isinstance(group, FgAbelianGroup)
        computed_cyclic = group if group.is_nontrivial_finite_cyclic else None
        consistent = (
            crit_free == group.is_free
            and crit_finite == group.is_finite
            and crit_cyclic == computed_cyclic
            and crit_half == (group.order() == 2)
        )
        if not consistent:
            raise OracleMismatchError(
                f"predicate criteria disagree with the computed group {group} "
                f"for blocks {variety.blocks}"
            )
    elif crit_free or crit_finite or crit_cyclic or crit_half:
        raise OracleMismatchError(
            f"predicate criteria fired on a non-rational variety {variety.blocks}"
        )

    return ClassGroupPredicates(crit_free, crit_finite, crit_cyclic, crit_half)


class IsolatedSingularityCase(enum.Enum):
    DIM2_TORSION = "dim2_torsion"
    DIM3_FREE = "dim3_free"
    DIM45_FACTORIAL = "dim45_factorial"
    NOT_ISOLATED = "not_isolated"


@dataclass(frozen=True)
class IsolatedSingularityReport:
    isolated: bool
    case: IsolatedSingularityCase


def isolated_singularity_report(variety: TrinomialVariety) -> IsolatedSingularityReport:
    """Decide whether the singular locus is a point, and classify by dimension.

    The singularity is isolated iff all blocks are single variables (a
    surface) or there is a single relation whose sorted block sizes are
    (n0, n1, 2) with n0 <= n1 <= 2 and every size-2 block has both exponents
    equal to 1.  Requires m = 0; free variables fatten the singular locus.
    """
    require_adjusted(variety)
    if variety.m > 0:
        raise FreeVariablesPresentError("isolated singularities require m = 0")
    if variety.is_degenerate:
        # Affine spaces are smooth; by convention not an isolated singularity.
        return IsolatedSingularityReport(False, IsolatedSingularityCase.NOT_ISOLATED)

    sizes = tuple(len(block) for block in variety.blocks)
    if all(size == 1 for size in sizes):
        return IsolatedSingularityReport(True, IsolatedSingularityCase.DIM2_TORSION)

    hypersurface = (
        len(variety.blocks) == 3
        and max(sizes) == 2
        and all(
            all(e == 1 for e in block)
            for block in variety.blocks
            if len(block) == 2
        )
    )
    if hypersurface:
        dim = dimension(variety)
        case = (
            IsolatedSingularityCase.DIM3_FREE
            if dim == 3
            else IsolatedSingularityCase.DIM45_FACTORIAL
        )
        return IsolatedSingularityReport(True, case)
    return IsolatedSingularityReport(False, IsolatedSingularityCase.NOT_ISOLATED)


class GroupMethod(enum.Enum):
    FORMULA = "formula"
    SNF = "snf"
    BOTH = "both"


@dataclass(frozen=True)
class ClassGroupReport:
    """Bundle of the class group data for one adjusted variety.

    ``rank_check`` pairs the formula rank with the dimension difference
    dim(TCS) - dim(X); the two always agree (enforced).  For non-rational
    input only ``group`` (the marker) and ``method`` are populated.
    """

    group: ClassGroup
    method: GroupMethod
    n_tilde: Optional[int]
    rank_check: Optional[tuple[int, int]]
    ctors: Optional[FgAbelianGroup]


def class_group_report(
    variety: TrinomialVariety, method: GroupMethod = GroupMethod.BOTH
) -> ClassGroupReport:
    """Compute the class group by the requested method(s) plus side invariants.

    With method BOTH the formula and Smith-normal-form routes are both run
    and must agree (OracleMismatchError otherwise).
    """
    require_adjusted(variety)
    kind = rationality_class(variety)
    if not kind.is_rational:
        return ClassGroupReport(NOT_FINITELY_GENERATED, method, None, None, None)
    if kind.is_factorial:
        rank = rank_formula(variety)
        return ClassGroupReport(TRIVIAL_GROUP, method, 0, (rank, rank), TRIVIAL_GROUP)

    formula = class_group_formula(variety) if method is not GroupMethod.SNF else None
    snf = class_group_snf(variety) if method is not GroupMethod.FORMULA else None
    if method is GroupMethod.BOTH and formula != snf:
        raise OracleMismatchError(
            f"class group mismatch for blocks {variety.blocks}: "
            f"formula {formula}, smith cokernel {snf}\n{grading_matrix(variety)}"
        )
    group = formula if formula is not None else snf
    assert isinstance(group, FgAbelianGroup)
    rank = rank_formula(variety)
    if group.rank != rank:
        raise OracleMismatchError(
            f"group rank {group.rank} disagrees with the rank formula {rank}"
        )
    return ClassGroupReport(
        group, method, rank, (rank, rank), compulsory_torsion(variety)
    )
