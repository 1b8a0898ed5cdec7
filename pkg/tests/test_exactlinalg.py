"""Tests for the exact integer linear algebra layer.

Expected values tagged by hand derivation below were computed from the
gcd-of-minors definition (product of the first k invariant factors equals the
k-th determinantal divisor) or by explicit generator/relation elimination,
independently of the Smith elimination they check.
"""

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tricl.exactlinalg import (
    FgAbelianGroup,
    IntMatrix,
    block_diagonal,
    canonical_group,
    cokernel,
    coordinates_in_lattice,
    determinantal_divisor,
    element_order_in_cokernel,
    hermite_basis,
    is_saturated_sublattice,
    is_sublattice,
    matrix_A,
    matrix_B,
    smith_invariants,
    smith_with_transforms,
)


def M(rows, cols=None):
    return IntMatrix.from_rows(rows, cols)


small_matrices = st.integers(min_value=0, max_value=6).flatmap(
    lambda r: st.integers(min_value=0 if r else 1, max_value=6).flatmap(
        lambda c: st.lists(
            st.lists(st.integers(min_value=-9, max_value=9), min_size=c, max_size=c),
            min_size=r,
            max_size=r,
        ).map(lambda rows: IntMatrix.from_rows(rows, c))
    )
)


class TestIntMatrix:
    def test_shape_validation(self):
        with pytest.raises(ValueError):
            IntMatrix(2, 2, (1, 2, 3))
        with pytest.raises(ValueError):
            M([[1, 2], [3]])
        with pytest.raises(ValueError):
            M([])  # needs cols

    def test_empty_matrices(self):
        assert M([], cols=4).rows == 0
        assert IntMatrix.zeros(0, 0).entries == ()

    def test_accessors(self):
        a = M([[1, 2, 3], [4, 5, 6]])
        assert a[1, 2] == 6
        assert a.row(0) == (1, 2, 3)
        assert a.transpose() == M([[1, 4], [2, 5], [3, 6]])
        assert a.stack(M([[7, 8, 9]])) == M([[1, 2, 3], [4, 5, 6], [7, 8, 9]])
        assert a.with_row([7, 8, 9]) == a.stack(M([[7, 8, 9]]))

    def test_matmul(self):
        a = M([[1, 2], [3, 4]])
        assert a @ IntMatrix.identity(2) == a
        assert a @ M([[0, 1], [1, 0]]) == M([[2, 1], [4, 3]])

    def test_block_diagonal(self):
        b = block_diagonal([M([[1, 2]]), M([[3], [4]])])
        assert b == M([[1, 2, 0], [0, 0, 3], [0, 0, 4]])


class TestSmith:
    def test_identity(self):
        data = smith_invariants(IntMatrix.identity(2))
        assert data.rank == 2
        assert data.invariant_factors == (1, 1)

    def test_gcd_of_minors_example(self):
        # d1 = gcd(2,4,6,8) = 2, d1*d2 = |det| = |2*8 - 4*6| = 8, so d2 = 4.
        data = smith_invariants(M([[2, 4], [6, 8]]))
        assert data.rank == 2
        assert data.invariant_factors == (2, 4)

    def test_zero_matrix(self):
        data = smith_invariants(IntMatrix.zeros(3, 3))
        assert data.rank == 0
        assert data.invariant_factors == ()

    def test_empty_matrix(self):
        assert smith_invariants(M([], cols=3)).rank == 0

    def test_divisibility_chain_is_enforced_by_construction(self):
        data = smith_invariants(M([[2, 0], [0, 3]]))
        assert data.invariant_factors == (1, 6)

    def test_transforms(self):
        a = M([[2, 4, 4], [-6, 6, 12], [10, 4, 16]])
        u, d, v = smith_with_transforms(a)
        assert u @ a @ v == d
        # off-diagonal of d vanishes
        assert all(d[i, j] == 0 for i in range(3) for j in range(3) if i != j)
        # u, v unimodular
        assert smith_invariants(u).invariant_factors == (1, 1, 1)
        assert smith_invariants(v).invariant_factors == (1, 1, 1)

    @given(small_matrices)
    @settings(max_examples=150, deadline=None)
    def test_factor_product_equals_determinantal_divisor(self, a):
        data = smith_invariants(a)
        product = 1
        for k, factor in enumerate(data.invariant_factors, start=1):
            product *= factor
            assert product == determinantal_divisor(a, k)

    @given(small_matrices)
    @settings(max_examples=100, deadline=None)
    def test_transforms_reproduce_diagonal(self, a):
        u, d, v = smith_with_transforms(a)
        assert u @ a @ v == d
        diag = tuple(d[i, i] for i in range(min(a.rows, a.cols)) if d[i, i])
        assert diag == smith_invariants(a).invariant_factors


class TestCokernel:
    def test_identity_is_trivial(self):
        assert cokernel(IntMatrix.identity(2)).is_trivial

    def test_single_relation(self):
        assert cokernel(M([[2]])) == FgAbelianGroup(0, (2,))

    def test_zero_rows_give_free_group(self):
        assert cokernel(M([], cols=3)) == FgAbelianGroup(3, ())

    def test_grading_matrix_of_a3_quotient(self):
        # Relations among six generators a1,a2,b1,b2,c1,c2:
        # a1+a2 = b1+b2 = c1+c2 = 0, 2a2 = b1 = b2 = c1 = c2 = 2a1; eliminating
        # by hand leaves a single generator a1 with 4*a1 = 0.
        rows = [
            [1, 1, 0, 0, 0, 0],
            [0, 0, 1, 1, 0, 0],
            [0, 0, 0, 0, 1, 1],
            [-2, 2, 0, 0, 0, 0],
            [-2, 0, 1, 0, 0, 0],
            [-2, 0, 0, 1, 0, 0],
            [-2, 0, 0, 0, 1, 0],
            [-2, 0, 0, 0, 0, 1],
        ]
        assert cokernel(M(rows)) == FgAbelianGroup(0, (4,))

    @given(small_matrices, st.randoms(use_true_random=False))
    @settings(max_examples=120, deadline=None)
    def test_invariance_under_row_operations(self, a, rng):
        """Metamorphic: row permutation, negation and row adds fix the cokernel."""
        base = cokernel(a)
        rows = a.to_rows()
        if rows:
            for _ in range(6):
                op = rng.randrange(3)
                i = rng.randrange(len(rows))
                k = rng.randrange(len(rows))
                if op == 0:
                    rows[i], rows[k] = rows[k], rows[i]
                elif op == 1:
                    rows[i] = [-x for x in rows[i]]
                elif i != k:
                    rows[i] = [x + y for x, y in zip(rows[i], rows[k])]
        assert cokernel(M(rows, a.cols)) == base


class TestDeterminantalDivisor:
    def test_identity(self):
        assert determinantal_divisor(IntMatrix.identity(3), 2) == 1

    def test_single_minor(self):
        assert determinantal_divisor(M([[2, 4], [6, 8]]), 2) == 8

    def test_relation_block(self):
        # All 3x3 minors of the k=2, (2,2) relation block are even and one
        # equals +-2, so the gcd is exactly 2.
        assert determinantal_divisor(matrix_A(2, (2, 2)), 3) == 2

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            determinantal_divisor(IntMatrix.identity(2), 3)
        with pytest.raises(ValueError):
            determinantal_divisor(IntMatrix.identity(2), 0)

    def test_zero_when_rank_deficient(self):
        assert determinantal_divisor(M([[1, 2], [2, 4]]), 2) == 0


class TestRelationBlocks:
    def test_matrix_A_smallest(self):
        assert matrix_A(1, (3,)) == M([[3], [1]])

    def test_matrix_A_displayed_shape(self):
        assert matrix_A(2, (2, 2)) == M(
            [[2, 2, 0, 0], [0, 0, 2, 2], [1, 0, 1, 0], [0, 1, 0, 1]]
        )

    def test_matrix_A_rejects_bad_input(self):
        with pytest.raises(ValueError):
            matrix_A(0, (2,))
        with pytest.raises(ValueError):
            matrix_A(1, ())
        with pytest.raises(ValueError):
            matrix_A(1, (0,))

    @pytest.mark.parametrize("k", [1, 2, 3])
    @pytest.mark.parametrize("l", [(1,), (4,), (2, 2), (2, 4), (3, 5), (2, 4, 6), (1, 2, 3)])
    def test_matrix_A_rank_and_divisor(self, k, l):
        n = len(l)
        a = matrix_A(k, l)
        data = smith_invariants(a)
        assert data.rank == n - 1 + k
        top = determinantal_divisor(a, data.rank)
        assert math.gcd(*l) ** (k - 1) % top == 0

    def test_matrix_B_smallest(self):
        assert matrix_B(1, (4,), 4) == M([[4], [1]])

    def test_matrix_B_displayed_shape(self):
        assert matrix_B(2, (2, 2), 2) == M([[2, 2, 0, 0], [0, 0, 2, 2], [1, 1, 1, 1]])

    def test_matrix_B_divisibility_enforced(self):
        with pytest.raises(ValueError):
            matrix_B(2, (2, 3), 2)

    def test_matrix_B_rows_inside_matrix_A_lattice(self):
        assert is_sublattice(matrix_B(2, (2, 2), 2), matrix_A(2, (2, 2)))


class TestLattices:
    def test_hermite_basis_is_canonical(self):
        a = M([[2, 2, 0, 0], [0, 0, 2, 2], [1, 0, 1, 0], [0, 1, 0, 1]])
        b = M([[1, 0, 1, 0], [0, 1, 0, 1], [0, 0, 2, 2], [2, 2, 0, 0]])
        assert hermite_basis(a) == hermite_basis(b)
        assert hermite_basis(a) == M([[1, 0, 1, 0], [0, 1, 0, 1], [0, 0, 2, 2]])

    def test_coordinates(self):
        basis = hermite_basis(M([[1, 0, 1, 0], [0, 1, 0, 1], [0, 0, 2, 2]]))
        assert coordinates_in_lattice(basis, (1, 1, 1, 1)) == (1, 1, 0)
        assert coordinates_in_lattice(basis, (1, 0, 0, 0)) is None

    def test_saturated_reflexive(self):
        i2 = IntMatrix.identity(2)
        assert is_saturated_sublattice(i2, i2)

    def test_index_two_sublattice_not_saturated(self):
        assert not is_saturated_sublattice(M([[2, 0]]), IntMatrix.identity(2))

    def test_non_sublattice_returns_false(self):
        assert not is_saturated_sublattice(IntMatrix.identity(2), M([[2, 0], [0, 2]]))

    def test_zero_lattice_is_saturated(self):
        assert is_saturated_sublattice(M([], cols=2), IntMatrix.identity(2))
        assert is_saturated_sublattice(IntMatrix.zeros(2, 2), IntMatrix.identity(2))

    def test_relation_block_lattice_is_saturated(self):
        assert is_saturated_sublattice(matrix_B(2, (2, 2), 2), matrix_A(2, (2, 2)))

    @pytest.mark.parametrize("k", [1, 2, 3])
    @pytest.mark.parametrize("l", [(2,), (4,), (2, 2), (2, 4), (3, 3), (6, 4, 2)])
    def test_relation_block_saturation_family(self, k, l):
        g = math.gcd(*l)
        assert is_saturated_sublattice(matrix_B(k, l, g), matrix_A(k, l))

    @given(small_matrices, st.integers(min_value=2, max_value=5))
    @settings(max_examples=80, deadline=None)
    def test_scaled_lattice_never_saturated_unless_zero(self, a, q):
        scaled = IntMatrix(a.rows, a.cols, tuple(q * x for x in a.entries))
        if smith_invariants(a).rank == 0:
            assert is_saturated_sublattice(scaled, a)
        else:
            assert not is_saturated_sublattice(scaled, a)

    @given(small_matrices)
    @settings(max_examples=80, deadline=None)
    def test_full_lattice_saturated_in_itself(self, a):
        assert is_saturated_sublattice(a, a)


class TestCanonicalGroup:
    def test_crt(self):
        assert canonical_group([2, 3]) == FgAbelianGroup(0, (6,))

    def test_repeated_factor(self):
        assert canonical_group([2, 2], rank=1) == FgAbelianGroup(1, (2, 2))

    def test_remark_example(self):
        assert canonical_group([2], rank=2) == FgAbelianGroup(2, (2,))

    def test_drops_ones(self):
        assert canonical_group([1, 1, 1]) == FgAbelianGroup(0, ())
        assert canonical_group([1, 4, 1, 6]) == FgAbelianGroup(0, (2, 12))

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            canonical_group([0])
        with pytest.raises(ValueError):
            canonical_group([2], rank=-1)

    @given(
        st.lists(st.integers(min_value=1, max_value=30), max_size=6),
        st.lists(st.integers(min_value=1, max_value=30), max_size=6),
        st.integers(min_value=0, max_value=3),
    )
    @settings(max_examples=150, deadline=None)
    def test_associativity(self, xs, ys, rank):
        combined = canonical_group(xs + ys, rank)
        g1 = canonical_group(xs)
        g2 = canonical_group(ys)
        recombined = canonical_group(
            g1.invariant_factors + g2.invariant_factors, rank
        )
        assert combined == recombined
        # canonical output satisfies the chain invariant by construction
        fs = combined.invariant_factors
        assert all(b % a == 0 for a, b in zip(fs, fs[1:]))


class TestFgAbelianGroup:
    def test_validation(self):
        with pytest.raises(ValueError):
            FgAbelianGroup(0, (1,))
        with pytest.raises(ValueError):
            FgAbelianGroup(0, (4, 6))
        with pytest.raises(ValueError):
            FgAbelianGroup(-1, ())

    def test_rendering(self):
        assert str(FgAbelianGroup(0, ())) == "0"
        assert str(FgAbelianGroup(1, ())) == "Z"
        assert str(FgAbelianGroup(2, (2,))) == "Z^2 x Z/2"
        assert str(FgAbelianGroup(0, (3, 6))) == "Z/3 x Z/6"

    def test_order(self):
        assert FgAbelianGroup(0, (3, 6)).order() == 18
        assert FgAbelianGroup(1, ()).order() is None


class TestElementOrder:
    def test_orders_in_z4(self):
        # Z^1 / <(4)> = Z/4
        relations = M([[4]])
        assert element_order_in_cokernel(relations, (1,)) == 4
        assert element_order_in_cokernel(relations, (2,)) == 2
        assert element_order_in_cokernel(relations, (4,)) == 1

    def test_infinite_order(self):
        assert element_order_in_cokernel(M([], cols=1), (1,)) is None

    def test_mixed_group(self):
        # Z^2 / <(2, 0)> = Z/2 x Z
        relations = M([[2, 0]])
        assert element_order_in_cokernel(relations, (1, 0)) == 2
        assert element_order_in_cokernel(relations, (0, 1)) is None

    @given(small_matrices, st.randoms(use_true_random=False))
    @settings(max_examples=80, deadline=None)
    def test_lattice_rows_have_order_one(self, a, rng):
        if a.rows == 0:
            return
        i = rng.randrange(a.rows)
        k = rng.randrange(a.rows)
        combined = [x + 2 * y for x, y in zip(a.row(i), a.row(k))]
        assert element_order_in_cokernel(a, combined) == 1
