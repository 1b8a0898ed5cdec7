"""Varieties cut out by chains T_i^{l_i} - T_{i+1}^{l_{i+1}} - theta_i.

These arise side by side with trinomial varieties as total coordinate spaces
of rational varieties with a complexity-one torus action, but carry
non-constant invariant functions.  Their class group is decided by the block
gcds alone; the finitely generated cases lift to a trinomial variety with one
extra leading block, which is how the computation reduces to the trinomial
formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .classgroup import NOT_FINITELY_GENERATED, ClassGroup
from .errors import (
    DuplicateThetaError,
    EmptyBlockError,
    InvalidVarietyError,
    NonPositiveExponentError,
    NotAdjustedError,
)
from .exactlinalg import TRIVIAL_GROUP, FgAbelianGroup
from .variety import GENERIC_THETA, TrinomialVariety, _coerce_blocks, _coerce_theta


@dataclass(frozen=True)
class Type1Variety:
    """Exponent blocks l_1..l_r, free variables, coefficients with theta_1 = 1.

    Fewer than two blocks leave no relation and describe an affine space
    (flagged degenerate, trivial class group).
    """

    blocks: tuple[tuple[int, ...], ...]
    m: int = 0
    theta: Optional[tuple] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "blocks", _coerce_blocks(self.blocks))
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "theta", _coerce_theta(self.theta))

    @property
    def r(self) -> int:
        return len(self.blocks)

    @property
    def n(self) -> int:
        return sum(len(block) for block in self.blocks)

    @property
    def is_degenerate(self) -> bool:
        return len(self.blocks) < 2

    def block_gcds(self) -> tuple[int, ...]:
        return tuple(math.gcd(*block) for block in self.blocks)


def validate_type1(variety: Type1Variety) -> Type1Variety:
    for index, block in enumerate(variety.blocks):
        if not block:
            raise EmptyBlockError(f"block {index} is empty")
        if any(e < 1 for e in block):
            raise NonPositiveExponentError(f"block {index} has a non-positive exponent: {block}")
    if variety.m < 0:
        raise InvalidVarietyError("m must be nonnegative")
    if variety.theta is not None:
        expected = max(len(variety.blocks) - 1, 0)
        if len(variety.theta) != expected:
            raise InvalidVarietyError(
                f"expected {expected} coefficients for {len(variety.blocks)} blocks, "
                f"got {len(variety.theta)}"
            )
        if variety.theta and variety.theta[0] not in (GENERIC_THETA, Fraction(1)):
            raise InvalidVarietyError("the first coefficient is fixed to 1")
        exact = [t for t in variety.theta if isinstance(t, Fraction)]
        if any(t == 0 for t in exact):
            raise InvalidVarietyError("coefficients must be nonzero")
        if len(set(exact)) != len(exact):
            raise DuplicateThetaError("coefficients must be pairwise different")
    return variety


def adjust_type1(variety: Type1Variety) -> Type1Variety:
    """Sort blocks by gcd descending and strip linear single-variable blocks.

    Ties break by block size descending, then original position.  Each
    deleted block removes one relation; with fewer than two blocks left the
    data is degenerate.  Coefficients are reset to generic placeholders.
    """
    validate_type1(variety)
    work = [(index, block) for index, block in enumerate(variety.blocks)]
    while len(work) >= 2 and any(block == (1,) for _, block in work):
        position = next(i for i, (_, block) in enumerate(work) if block == (1,))
        work.pop(position)
    work.sort(key=lambda item: (-math.gcd(*item[1]), -len(item[1]), item[0]))
    return Type1Variety(tuple(block for _, block in work), variety.m, None)


def is_adjusted_type1(variety: Type1Variety) -> bool:
    validate_type1(variety)
    if variety.is_degenerate:
        return True
    if any(block == (1,) for block in variety.blocks):
        return False
    gcds = variety.block_gcds()
    return all(a >= b for a, b in zip(gcds, gcds[1:]))


def require_adjusted_type1(variety: Type1Variety) -> Type1Variety:
    if not is_adjusted_type1(variety):
        raise NotAdjustedError(f"Type 1 variety with blocks {variety.blocks} is not adjusted")
    return variety


def type1_component_counts(variety: Type1Variety) -> tuple[int, ...]:
    """c(1) = L2, c(2) = L1, c(i) = L1 L2 for i >= 3 (1-based block indices)."""
    gcds = variety.block_gcds()
    counts = [gcds[1], gcds[0]]
    counts += [gcds[0] * gcds[1]] * (len(gcds) - 2)
    return tuple(counts)


def type1_n_tilde(variety: Type1Variety) -> int:
    require_adjusted_type1(variety)
    if variety.is_degenerate:
        return 0
    counts = type1_component_counts(variety)
    return sum(
        (c - 1) * len(block) - c + 1 for c, block in zip(counts, variety.blocks)
    )


def class_group_type1(variety: Type1Variety) -> ClassGroup:
    """Divisor class group of an adjusted Type 1 variety.

    Trivial iff all block gcds are 1 (or the data degenerates to an affine
    space); a single quadratic relation in two single variables is the
    boundary case with free rank 0.  Free of the expected rank when L1 > 1
    with all later gcds 1, or L1 = L2 = 2 with all later gcds 1.  Everything
    else is not finitely generated.
    """
    require_adjusted_type1(variety)
    if variety.is_degenerate:
        return TRIVIAL_GROUP
    gcds = variety.block_gcds()
    if all(g == 1 for g in gcds):
        return TRIVIAL_GROUP
    if gcds[0] > 1 and all(g == 1 for g in gcds[1:]):
        return FgAbelianGroup(type1_n_tilde(variety), ())
    if gcds[0] == gcds[1] == 2 and all(g == 1 for g in gcds[2:]):
        # rank 0 here happens exactly for V(T1^2 + T2^2 + 1)
        return FgAbelianGroup(type1_n_tilde(variety), ())
    return NOT_FINITELY_GENERATED


def lift_to_type2(variety: Type1Variety) -> TrinomialVariety:
    """Trinomial variety with a new leading block [lcm of the block gcds].

    The original variety times a torus factor embeds into the lift as the
    complement of the leading coordinate hyperplane, so rationality and the
    finitely generated cases transfer.  Coefficients are generic.
    """
    require_adjusted_type1(variety)
    gcds = variety.block_gcds()
    ell = math.lcm(*gcds) if gcds else 1
    return TrinomialVariety(((ell,),) + variety.blocks, variety.m, None)
