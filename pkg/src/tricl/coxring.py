"""Total coordinate spaces, platonic triples, iteration chains, surfaces.

The total coordinate space of an adjusted rational trinomial variety is again
a trinomial variety; its block data is read off the column gcds of a
structured integer matrix.  Iterating the construction terminates in a
factorial variety exactly for the hyperplatonic inputs, and the induced
sequences of basic platonic triples match the quotient chains of the du Val
surfaces Y(a, b, c) = V(T1^a + T2^b + T3^c).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (
    FactorialInputError,
    IterationNotAdmittedError,
    NotHyperplatonicError,
    NotRationalError,
    OracleMismatchError,
)
from .exactlinalg import FgAbelianGroup, IntMatrix, is_saturated_sublattice, matrix_A, matrix_B
from .variety import (
    TrinomialVariety,
    adjust,
    component_counts,
    exponent_matrix,
    rationality_class,
    require_adjusted,
    validate,
)


def _block_offsets(variety: TrinomialVariety) -> list[int]:
    offsets = []
    position = 0
    for block in variety.blocks:
        offsets.append(position)
        position += len(block)
    return offsets


def _p1_rows(variety: TrinomialVariety) -> IntMatrix:
    """The r x (n + m) matrix whose column gcds carry the TCS exponents.

    Row 1 couples blocks 0 and 1 scaled by 1/gcd(L0, L1), row 2 couples
    blocks 0 and 2 scaled by 1/gcd(L0, L2), the remaining rows couple block 0
    with block i unscaled.
    """
    gcds = variety.block_gcds()
    offsets = _block_offsets(variety)
    width = variety.n + variety.m
    l0 = variety.blocks[0]
    rows = []
    for i in range(1, len(variety.blocks)):
        scale = math.gcd(gcds[0], gcds[i]) if i <= 2 else 1
        row = [0] * width
        row[: len(l0)] = [-e // scale for e in l0]
        li = variety.blocks[i]
        row[offsets[i] : offsets[i] + len(li)] = [e // scale for e in li]
        rows.append(row)
    return IntMatrix.from_rows(rows, width)


def p1_matrix(variety: TrinomialVariety) -> IntMatrix:
    """Scaled exponent matrix of an adjusted, rational, non-factorial variety."""
    require_adjusted(variety)
    kind = rationality_class(variety)
    if not kind.is_rational:
        raise NotRationalError("the scaled exponent matrix needs a rational variety")
    if kind.is_factorial:
        raise FactorialInputError("a factorial variety is its own total coordinate space")
    return _p1_rows(variety)


@dataclass(frozen=True)
class CoxConstruction:
    """Total-coordinate-space data of an adjusted rational variety.

    ``c`` lists the component counts c(i); ``tcs_blocks`` groups, per source
    block, the c(i) identical exponent vectors of the total coordinate space;
    ``tcs`` is the flattened (raw, not yet adjusted) trinomial variety with
    n_prime block variables and r_prime + 1 blocks.
    """

    source: TrinomialVariety
    p1: IntMatrix
    c: tuple[int, ...]
    tcs_blocks: tuple[tuple[tuple[int, ...], ...], ...]
    tcs: TrinomialVariety
    n_prime: int
    r_prime: int


def total_coordinate_space(variety: TrinomialVariety) -> CoxConstruction:
    """Compute the total coordinate space of an adjusted rational variety.

    Factorial varieties (including degenerate affine spaces) are their own
    total coordinate space and yield the identity construction.  Otherwise
    each source block i contributes c(i) copies of the vector of column gcds
    of the scaled exponent matrix; the free-variable count m is preserved.
    """
    require_adjusted(variety)
    kind = rationality_class(variety)
    if not kind.is_rational:
        raise NotRationalError("the total coordinate space needs a rational variety")

    if kind.is_factorial:
        ones = (1,) * len(variety.blocks)
        grouped = tuple((block,) for block in variety.blocks)
        if len(variety.blocks) >= 2:
            p1 = _p1_rows(variety) if len(variety.blocks) >= 3 else exponent_matrix(variety)
        else:
            p1 = IntMatrix.zeros(0, variety.n + variety.m)
        return CoxConstruction(
            source=variety,
            p1=p1,
            c=ones,
            tcs_blocks=grouped,
            tcs=variety,
            n_prime=variety.n,
            r_prime=variety.r,
        )

    p1 = _p1_rows(variety)
    counts = component_counts(variety)
    offsets = _block_offsets(variety)
    grouped = []
    for i, block in enumerate(variety.blocks):
        # gcd over the whole column; zero entries outside the structural
        # sparsity pattern are inert since gcd(x, 0) = x
        column_gcds = tuple(
            math.gcd(*(p1[row, offsets[i] + j] for row in range(p1.rows)))
            for j in range(len(block))
        )
        copies = (column_gcds,) * counts[i]
        assert len(set(copies)) == 1  # all copies within a block coincide
        grouped.append(copies)
    grouped = tuple(grouped)
    flat = tuple(vec for copies in grouped for vec in copies)
    tcs = TrinomialVariety(flat, variety.m, None)
    n_prime = sum(counts[i] * len(block) for i, block in enumerate(variety.blocks))
    r_prime = sum(counts) - 1
    assert n_prime == tcs.n and r_prime == tcs.r
    return CoxConstruction(variety, p1, counts, grouped, tcs, n_prime, r_prime)


_ADE_BY_TRIPLE = {(5, 3, 2): "E8", (4, 3, 2): "E6", (3, 3, 2): "D4"}


@dataclass(frozen=True)
class PlatonicTriple:
    """A platonic triple a >= b >= c with its ADE-style label.

    The label is "E8", "E6", "D4", "A{x-1}" for (x, 2, 2), or "Smooth" for
    (x, y, 1) triples, whose surface is an affine plane after eliminating the
    linear variable.
    """

    a: int
    b: int
    c: int
    ade_label: str

    @classmethod
    def classify(cls, triple: Sequence[int]) -> "PlatonicTriple":
        a, b, c = (int(x) for x in triple)
        if not (a >= b >= c >= 1):
            raise ValueError(f"triple {triple} is not decreasing positive")
        if c == 1:
            label = "Smooth"
        elif (a, b, c) in _ADE_BY_TRIPLE:
            label = _ADE_BY_TRIPLE[(a, b, c)]
        elif b == c == 2:
            label = f"A{a - 1}"
        else:
            raise ValueError(f"triple {triple} is not platonic")
        return cls(a, b, c, label)

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def __str__(self) -> str:
        return f"({self.a},{self.b},{self.c})[{self.ade_label}]"


def is_hyperplatonic(variety: TrinomialVariety) -> Optional[PlatonicTriple]:
    """The basic platonic triple when 1/L0 + ... + 1/Lr > r - 1, else None.

    Evaluated in exact rational arithmetic.  Both the inequality and the
    triple (the three largest block gcds, padded with 1s below three blocks)
    are invariant under adjustment, so any valid variety is accepted.
    """
    validate(variety)
    gcds = variety.block_gcds()
    threshold = len(variety.blocks) - 2  # r - 1
    if sum(Fraction(1, g) for g in gcds) <= threshold:
        return None
    top = sorted(gcds, reverse=True)[:3]
    top += [1] * (3 - len(top))
    return PlatonicTriple.classify(top)


def basic_platonic_triple(variety: TrinomialVariety) -> PlatonicTriple:
    triple = is_hyperplatonic(variety)
    if triple is None:
        raise NotHyperplatonicError(
            f"variety with block gcds {variety.block_gcds()} is not hyperplatonic"
        )
    return triple


def classify_chain_pattern(
    tcs_triple: Optional[PlatonicTriple], triple: Optional[PlatonicTriple]
) -> Optional[str]:
    """Label of the quotient step whose total coordinate space has the first
    triple and whose base has the second.

    The four admissible sequences overlap on shared steps (the pair
    (1,1,1) -> (x,x,1) opens both torus-factor chains and is an x = y
    instance of pattern (iv)), so labels are assigned with the fixed
    precedence (i) > (ii) > (iii) > (iv).
    """
    if tcs_triple is None or triple is None:
        return None
    prev = tcs_triple.as_tuple()
    nxt = triple.as_tuple()
    if (prev, nxt) in (
        ((1, 1, 1), (2, 2, 2)),
        ((2, 2, 2), (3, 3, 2)),
        ((3, 3, 2), (4, 3, 2)),
    ):
        return "(i)"
    a, b, c = prev
    x, y, z = nxt
    if prev == (1, 1, 1) and x == y >= 2 and z == 1:
        return "(ii)"
    if a == b and c == 1 and (x, y, z) == (2 * a, 2, 2):
        return "(ii)"
    if a == b and a % 2 == 1 and c == 1 and (x, y, z) == (a, 2, 2):
        return "(iii)"
    if c == 1 and z == 1:
        g = math.gcd(x, y)
        if g > 1 and (a, b) == (x // g, y // g):
            return "(iv)"
    return None


@dataclass(frozen=True)
class IterationStep:
    variety: TrinomialVariety
    class_group: FgAbelianGroup
    triple: Optional[PlatonicTriple]


@dataclass(frozen=True)
class IterationChain:
    """Chain of quotient presentations ending in a factorial variety.

    ``steps[k + 1].variety`` is the adjusted total coordinate space of
    ``steps[k].variety``; ``patterns[k]`` labels that step.
    """

    steps: tuple[IterationStep, ...]
    patterns: tuple[Optional[str], ...]

    @property
    def triples(self) -> tuple[Optional[tuple[int, int, int]], ...]:
        return tuple(s.triple.as_tuple() if s.triple else None for s in self.steps)


_MAX_CHAIN_LENGTH = 64


def iterate_cox_rings(variety: TrinomialVariety) -> IterationChain:
    """Apply total_coordinate_space + adjust until a factorial variety appears.

    Admissible exactly when every intermediate total coordinate space is
    factorial or hyperplatonic; otherwise IterationNotAdmittedError.  The
    input is adjusted internally.  Each step records the adjusted variety,
    its class group and, when hyperplatonic, its basic platonic triple.
    """
    from .classgroup import class_group_formula  # deferred: classgroup imports us

    current = adjust(validate(variety))[0]
    if not rationality_class(current).is_rational:
        raise NotRationalError("iteration needs a rational variety")

    steps: list[IterationStep] = []
    while True:
        kind = rationality_class(current)
        triple = is_hyperplatonic(current)
        if not kind.is_factorial and triple is None:
            raise IterationNotAdmittedError(
                "an intermediate total coordinate space is neither factorial "
                f"nor hyperplatonic (block gcds {current.block_gcds()})"
            )
        group = class_group_formula(current)
        steps.append(IterationStep(current, group, triple))
        if kind.is_factorial:
            break
        if len(steps) >= _MAX_CHAIN_LENGTH:
            raise OracleMismatchError("iteration did not reach a factorial variety")
        current = adjust(total_coordinate_space(current).tcs)[0]

    patterns = tuple(
        classify_chain_pattern(steps[k + 1].triple, steps[k].triple)
        for k in range(len(steps) - 1)
    )
    return IterationChain(tuple(steps), patterns)


def duval_surface(triple: PlatonicTriple) -> TrinomialVariety:
    """The surface V(T1^a + T2^b + T3^c) as a trinomial variety."""
    return TrinomialVariety(((triple.a,), (triple.b,), (triple.c,)), 0)


def _power_monomial(block_index: int, exponents: Sequence[int]) -> str:
    parts = []
    for j, e in enumerate(exponents, start=1):
        if e == 0:
            continue
        name = f"T{block_index}{j}"
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts) if parts else "1"


@dataclass(frozen=True)
class DuvalDiagram:
    """The commuting square relating a hyperplatonic variety to surfaces.

    ``y`` and ``yprime`` are the surfaces attached to the basic platonic
    triples of the variety and of its total coordinate space; ``verified``
    states that the total coordinate space of y again has the triple of
    yprime (for Smooth-labelled triples both sides degenerate to affine
    planes and are compared as such).  ``p_tilde`` and
    ``veronese_generators`` carry the degree-zero quotient data
    T_i^{l_i / L_i}; ``saturation_ok`` reports the per-block lattice check
    of the relation rows against their one-row quotient counterparts.
    """

    x_triple: PlatonicTriple
    xprime_triple: PlatonicTriple
    y: TrinomialVariety
    yprime: TrinomialVariety
    verified: bool
    p_tilde: IntMatrix
    veronese_generators: tuple[str, ...]
    saturation_ok: bool


def duval_diagram(variety: TrinomialVariety) -> DuvalDiagram:
    """Build and verify the surface correspondence for a hyperplatonic variety."""
    adjusted = adjust(validate(variety))[0]
    x_triple = is_hyperplatonic(adjusted)
    if x_triple is None:
        raise NotHyperplatonicError(
            f"variety with block gcds {variety.block_gcds()} is not hyperplatonic"
        )
    cox = total_coordinate_space(adjusted)
    xprime = adjust(cox.tcs)[0]
    xprime_triple = is_hyperplatonic(xprime)
    if xprime_triple is None:
        raise OracleMismatchError(
            "the total coordinate space of a hyperplatonic variety must be "
            "factorial or hyperplatonic"
        )

    y = duval_surface(x_triple)
    yprime = duval_surface(xprime_triple)
    y_tcs = adjust(total_coordinate_space(adjust(y)[0]).tcs)[0]
    y_tcs_triple = is_hyperplatonic(y_tcs)
    verified = y_tcs_triple is not None and (
        y_tcs_triple.as_tuple() == xprime_triple.as_tuple()
        or (y_tcs.is_degenerate and adjust(yprime)[0].is_degenerate)
    )

    gcds = adjusted.block_gcds()
    offsets = _block_offsets(adjusted)
    p_tilde_rows = []
    generators = []
    for i, block in enumerate(adjusted.blocks):
        row = [0] * adjusted.n
        scaled = [e // gcds[i] for e in block]
        row[offsets[i] : offsets[i] + len(block)] = scaled
        p_tilde_rows.append(row)
        generators.append(_power_monomial(i, scaled))
    p_tilde = IntMatrix.from_rows(p_tilde_rows, adjusted.n)

    saturation_ok = all(
        is_saturated_sublattice(
            matrix_B(cox.c[i], vector, math.gcd(*vector)),
            matrix_A(cox.c[i], vector),
        )
        for i, copies in enumerate(cox.tcs_blocks)
        for vector in copies[:1]
    )

    return DuvalDiagram(
        x_triple,
        xprime_triple,
        y,
        yprime,
        verified,
        p_tilde,
        tuple(generators),
        saturation_ok,
    )
