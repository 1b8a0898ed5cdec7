"""Exact linear algebra over the integers.

Everything in this module works with plain Python integers, so results stay
exact no matter how large intermediate values grow.  Matrices are immutable
value objects and every operation is a pure function, which makes the whole
module safe to use from multiple threads.

The heart of the module is Smith normal form (`smith_invariants`,
`smith_with_transforms`) together with the constructions built on top of it:
cokernels presented as finitely generated abelian groups, brute-force
determinantal divisors (the independent oracle for the Smith chain), Hermite
lattice bases, and the saturated-sublattice test.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence


@dataclass(frozen=True)
class IntMatrix:
    """Dense matrix of unbounded integers, stored row-major.

    `entries` has exactly ``rows * cols`` elements; both dimensions may be
    zero.  Instances are immutable; all arithmetic returns new matrices.
    """

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        """Build a matrix from an iterable of equal-length rows.

        `cols` is only required when `rows` is empty (the width cannot be
        inferred from no rows).
        """
        data = [tuple(int(x) for x in row) for row in rows]
        if data:
            width = len(data[0])
            if any(len(row) != width for row in data):
                raise ValueError("rows have differing lengths")
            if cols is not None and cols != width:
                raise ValueError("cols does not match the row length")
            cols = width
        elif cols is None:
            raise ValueError("cols is required for a matrix without rows")
        flat = tuple(x for row in data for x in row)
        return cls(len(data), cols, flat)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def diagonal(cls, values: Sequence[int]) -> "IntMatrix":
        n = len(values)
        return cls(n, n, tuple(values[i] if i == j else 0 for i in range(n) for j in range(n)))

    def __getitem__(self, key: tuple[int, int]) -> int:
        i, j = key
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(key)
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_rows(self) -> list[list[int]]:
        """Mutable row-of-lists copy, for in-place elimination."""
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            self.cols,
            self.rows,
            tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)),
        )

    def stack(self, other: "IntMatrix") -> "IntMatrix":
        """Vertical concatenation; both matrices must have the same width."""
        if self.cols != other.cols:
            raise ValueError("column counts differ")
        return IntMatrix(self.rows + other.rows, self.cols, self.entries + other.entries)

    def with_row(self, row: Sequence[int]) -> "IntMatrix":
        row = tuple(int(x) for x in row)
        if len(row) != self.cols:
            raise ValueError("row length does not match column count")
        return IntMatrix(self.rows + 1, self.cols, self.entries + row)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("inner dimensions differ")
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                out.append(sum(ri[k] * other[k, j] for k in range(self.cols)))
        return IntMatrix(self.rows, other.cols, tuple(out))

    def __str__(self) -> str:
        if self.rows == 0 or self.cols == 0:
            return f"<empty {self.rows}x{self.cols} matrix>"
        return "\n".join("[" + " ".join(str(x) for x in self.row(i)) + "]" for i in range(self.rows))


def block_diagonal(blocks: Sequence[IntMatrix]) -> IntMatrix:
    """Block-diagonal assembly of the given matrices."""
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    out = [[0] * cols for _ in range(rows)]
    i0 = j0 = 0
    for b in blocks:
        for i in range(b.rows):
            out[i0 + i][j0 : j0 + b.cols] = list(b.row(i))
        i0 += b.rows
        j0 += b.cols
    return IntMatrix.from_rows(out, cols)


@dataclass(frozen=True)
class FgAbelianGroup:
    """A finitely generated abelian group in invariant-factor canonical form.

    ``rank`` is the free-part exponent and ``invariant_factors`` is the
    divisibility chain d1 | d2 | ... | dk with every dk >= 2.  Two groups are
    isomorphic iff their canonical forms compare equal, so `==` decides
    isomorphism.
    """

    rank: int = 0
    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.rank < 0:
            raise ValueError("rank must be nonnegative")
        fs = tuple(int(f) for f in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", fs)
        if any(f < 2 for f in fs):
            raise ValueError("invariant factors must all be >= 2")
        for a, b in zip(fs, fs[1:]):
            if b % a != 0:
                raise ValueError(f"invariant factors do not form a chain: {a} does not divide {b}")

    @property
    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.invariant_factors

    @property
    def is_free(self) -> bool:
        return not self.invariant_factors

    @property
    def is_finite(self) -> bool:
        return self.rank == 0

    @property
    def is_nontrivial_finite_cyclic(self) -> bool:
        return self.rank == 0 and len(self.invariant_factors) == 1

    def order(self) -> Optional[int]:
        """Group order, or None when infinite."""
        if self.rank > 0:
            return None
        return math.prod(self.invariant_factors)

    def torsion_part(self) -> "FgAbelianGroup":
        return FgAbelianGroup(0, self.invariant_factors)

    def __str__(self) -> str:
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts.extend(f"Z/{d}" for d in self.invariant_factors)
        return " x ".join(parts) if parts else "0"


TRIVIAL_GROUP = FgAbelianGroup(0, ())


@dataclass(frozen=True)
class SmithData:
    """Rank and invariant factors (1s included) of an integer matrix."""

    source: IntMatrix
    rank: int
    invariant_factors: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.invariant_factors) != self.rank:
            raise ValueError("number of invariant factors must equal the rank")


def _smith_eliminate(work: list[list[int]], rows: int, cols: int,
                     u: Optional[list[list[int]]] = None,
                     v: Optional[list[list[int]]] = None) -> list[int]:
    """Diagonalize `work` in place by unimodular row/column operations.

    Returns the list of positive diagonal entries (a divisibility chain).
    When given, `u` and `v` accumulate the row respectively column operations,
    so that u_final @ M @ v_final equals the diagonal result.

    Pivot choice: the minimal-absolute-value nonzero entry of the trailing
    submatrix, located by a row-major scan, so runs are reproducible.
    """

    def swap_rows(a: int, b: int) -> None:
        work[a], work[b] = work[b], work[a]
        if u is not None:
            u[a], u[b] = u[b], u[a]

    def swap_cols(a: int, b: int) -> None:
        for row in work:
            row[a], row[b] = row[b], row[a]
        if v is not None:
            for row in v:
                row[a], row[b] = row[b], row[a]

    def row_sub(i: int, k: int, q: int) -> None:
        # row_i -= q * row_k
        wi, wk = work[i], work[k]
        for j in range(cols):
            wi[j] -= q * wk[j]
        if u is not None:
            ui, uk = u[i], u[k]
            for j in range(len(ui)):
                ui[j] -= q * uk[j]

    def col_sub(j: int, k: int, q: int) -> None:
        # col_j -= q * col_k
        for row in work:
            row[j] -= q * row[k]
        if v is not None:
            for row in v:
                row[j] -= q * row[k]

    diag: list[int] = []
    t = 0
    while t < rows and t < cols:
        # Locate the minimal-absolute-value nonzero pivot, row-major scan.
        best = None
        best_abs = 0
        for i in range(t, rows):
            wi = work[i]
            for j in range(t, cols):
                x = wi[j]
                if x != 0 and (best is None or abs(x) < best_abs):
                    best = (i, j)
                    best_abs = abs(x)
        if best is None:
            break
        if best[0] != t:
            swap_rows(t, best[0])
        if best[1] != t:
            swap_cols(t, best[1])

        while True:
            pivot = work[t][t]
            disturbed = False
            for i in range(t + 1, rows):
                a = work[i][t]
                if a:
                    q = a // pivot
                    if q:
                        row_sub(i, t, q)
                    if work[i][t]:
                        # Remainder is a strictly smaller pivot candidate.
                        swap_rows(t, i)
                        disturbed = True
                        break
            if disturbed:
                continue
            for j in range(t + 1, cols):
                a = work[t][j]
                if a:
                    q = a // pivot
                    if q:
                        col_sub(j, t, q)
                    if work[t][j]:
                        swap_cols(t, j)
                        disturbed = True
                        break
            if disturbed:
                continue
            break

        # Row and column are clear; force the pivot to divide the rest.
        pivot = work[t][t]
        offender = None
        for i in range(t + 1, rows):
            wi = work[i]
            for j in range(t + 1, cols):
                if wi[j] % pivot:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            row_sub(t, offender, -1)  # add the offending row to the pivot row
            continue  # rerun elimination at the same index t

        if pivot < 0:
            for j in range(cols):
                work[t][j] = -work[t][j]
            if u is not None:
                u[t] = [-x for x in u[t]]
        diag.append(work[t][t])
        t += 1
    return diag


def smith_invariants(matrix: IntMatrix) -> SmithData:
    """Rank and invariant-factor chain of an integer matrix.

    Deterministic and exact; empty matrices are allowed and have rank 0.
    """
    work = matrix.to_rows()
    diag = _smith_eliminate(work, matrix.rows, matrix.cols)
    return SmithData(matrix, len(diag), tuple(diag))


def smith_with_transforms(matrix: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form with transforms: returns (U, D, V) with U @ M @ V = D.

    U and V are unimodular; D is diagonal with the invariant factors on the
    diagonal (padded by zeros up to the shape of M).
    """
    work = matrix.to_rows()
    u = [[1 if i == j else 0 for j in range(matrix.rows)] for i in range(matrix.rows)]
    v = [[1 if i == j else 0 for j in range(matrix.cols)] for i in range(matrix.cols)]
    _smith_eliminate(work, matrix.rows, matrix.cols, u, v)
    return (
        IntMatrix.from_rows(u, matrix.rows),
        IntMatrix.from_rows(work, matrix.cols),
        IntMatrix.from_rows(v, matrix.cols),
    )


def cokernel(matrix: IntMatrix) -> FgAbelianGroup:
    """The quotient Z^cols / rowlattice(M) in canonical form.

    The free rank is ``cols - rank(M)``; the torsion is given by the Smith
    invariant factors larger than 1.  A matrix with no rows yields Z^cols.
    """
    data = smith_invariants(matrix)
    factors = tuple(f for f in data.invariant_factors if f > 1)
    return FgAbelianGroup(matrix.cols - data.rank, factors)


def _det_bareiss(rows: list[list[int]]) -> int:
    """Exact determinant by fraction-free Gaussian elimination; consumes `rows`."""
    n = len(rows)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            for i in range(k + 1, n):
                if rows[i][k]:
                    rows[k], rows[i] = rows[i], rows[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = rows[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                rows[i][j] = (rows[i][j] * pivot - rows[i][k] * rows[k][j]) // prev
            rows[i][k] = 0
        prev = pivot
    return sign * rows[n - 1][n - 1]


def determinantal_divisor(matrix: IntMatrix, k: int) -> int:
    """gcd of the absolute values of all k x k minors; 0 iff all minors vanish.

    Brute force over all row/column selections, so the cost grows like
    binomial(rows, k) * binomial(cols, k); fine for the small matrices this
    library produces, hopeless beyond that.  Stops early once the gcd hits 1.
    """
    if not (1 <= k <= min(matrix.rows, matrix.cols)):
        raise ValueError(f"k={k} out of range for a {matrix.rows}x{matrix.cols} matrix")
    g = 0
    grid = matrix.to_rows()
    for rsel in itertools.combinations(range(matrix.rows), k):
        for csel in itertools.combinations(range(matrix.cols), k):
            minor = [[grid[i][j] for j in csel] for i in rsel]
            g = math.gcd(g, _det_bareiss(minor))
            if g == 1:
                return 1
    return g


def matrix_A(k: int, exponents: Sequence[int]) -> IntMatrix:
    """The (k + n) x (k n) relation block for n = len(exponents).

    The first k rows place one copy of the exponent vector on each column
    block; the last n rows are k horizontal copies of the n x n identity.
    Its rank is n - 1 + k and its top determinantal divisor divides
    gcd(exponents)^(k-1).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    l = tuple(int(x) for x in exponents)
    if not l or any(x < 1 for x in l):
        raise ValueError("exponent vector must be nonempty with positive entries")
    n = len(l)
    rows = []
    for t in range(k):
        row = [0] * (k * n)
        row[t * n : (t + 1) * n] = list(l)
        rows.append(row)
    for j in range(n):
        row = [0] * (k * n)
        for t in range(k):
            row[t * n + j] = 1
        rows.append(row)
    return IntMatrix.from_rows(rows, k * n)


def matrix_B(k: int, exponents: Sequence[int], frak_l: int) -> IntMatrix:
    """Variant of `matrix_A` with the identity rows replaced by one row.

    The first k rows are those of `matrix_A`; the single last row holds k
    horizontal copies of exponents/frak_l, so the result has k + 1 rows.
    `frak_l` must divide every exponent.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    l = tuple(int(x) for x in exponents)
    if not l or any(x < 1 for x in l):
        raise ValueError("exponent vector must be nonempty with positive entries")
    if frak_l < 1 or any(x % frak_l for x in l):
        raise ValueError(f"{frak_l} does not divide all of {l}")
    n = len(l)
    rows = []
    for t in range(k):
        row = [0] * (k * n)
        row[t * n : (t + 1) * n] = list(l)
        rows.append(row)
    rows.append([x // frak_l for x in l] * k)
    return IntMatrix.from_rows(rows, k * n)


def hermite_basis(matrix: IntMatrix) -> IntMatrix:
    """Canonical basis of the row lattice of `matrix` (row-style Hermite form).

    The returned rows are in echelon form with positive pivots and entries
    above each pivot reduced into [0, pivot); zero rows are dropped, so equal
    lattices yield equal bases.
    """
    work = matrix.to_rows()
    rows, cols = matrix.rows, matrix.cols
    r = 0
    for j in range(cols):
        if r == rows:
            break
        # Combine rows r.. until column j holds at most one nonzero entry.
        while True:
            nonzero = [i for i in range(r, rows) if work[i][j]]
            if len(nonzero) <= 1:
                break
            nonzero.sort(key=lambda i: abs(work[i][j]))
            p = nonzero[0]
            for i in nonzero[1:]:
                q = work[i][j] // work[p][j]
                if q:
                    work[i] = [a - q * b for a, b in zip(work[i], work[p])]
        pivots = [i for i in range(r, rows) if work[i][j]]
        if not pivots:
            continue
        work[r], work[pivots[0]] = work[pivots[0]], work[r]
        if work[r][j] < 0:
            work[r] = [-x for x in work[r]]
        for i in range(r):
            q = work[i][j] // work[r][j]
            if q:
                work[i] = [a - q * b for a, b in zip(work[i], work[r])]
        r += 1
    return IntMatrix.from_rows(work[:r], cols)


def coordinates_in_lattice(basis: IntMatrix, vector: Sequence[int]) -> Optional[tuple[int, ...]]:
    """Integer coordinates of `vector` in a Hermite `basis`, or None.

    `basis` must come from `hermite_basis` (echelon rows).  Returns x with
    x @ basis == vector when the vector lies in the lattice.
    """
    residual = [int(x) for x in vector]
    if len(residual) != basis.cols:
        raise ValueError("vector length does not match the lattice dimension")
    coords = [0] * basis.rows
    for i in range(basis.rows):
        row = basis.row(i)
        j = next(idx for idx, x in enumerate(row) if x)
        if residual[j]:
            if residual[j] % row[j]:
                return None
            q = residual[j] // row[j]
            coords[i] = q
            for idx in range(basis.cols):
                residual[idx] -= q * row[idx]
    if any(residual):
        return None
    return tuple(coords)


def is_sublattice(sub: IntMatrix, sup: IntMatrix) -> bool:
    """True iff the row lattice of `sub` is contained in that of `sup`."""
    if sub.cols != sup.cols:
        raise ValueError("lattices live in different ambient spaces")
    basis = hermite_basis(sup)
    return all(
        coordinates_in_lattice(basis, sub.row(i)) is not None for i in range(sub.rows)
    )


def is_saturated_sublattice(sub: IntMatrix, sup: IntMatrix) -> bool:
    """True iff rowlattice(sub) lies in rowlattice(sup) with torsion-free quotient.

    A lattice basis of the sublattice is expressed integrally in a basis of
    the superlattice; saturation means all Smith invariant factors of that
    expression matrix equal 1.  Containment failure returns False rather than
    raising.  The zero lattice is saturated in anything.
    """
    if sub.cols != sup.cols:
        raise ValueError("lattices live in different ambient spaces")
    sup_basis = hermite_basis(sup)
    sub_basis = hermite_basis(sub)
    expression = []
    for i in range(sub_basis.rows):
        coords = coordinates_in_lattice(sup_basis, sub_basis.row(i))
        if coords is None:
            return False
        expression.append(coords)
    if not expression:
        return True
    data = smith_invariants(IntMatrix.from_rows(expression, sup_basis.rows))
    return all(f == 1 for f in data.invariant_factors)


def canonical_group(factors: Sequence[int], rank: int = 0) -> FgAbelianGroup:
    """Canonical form of the direct sum of Z/f_i (f_i >= 1) and Z^rank.

    Factors equal to 1 are dropped; the rest are rewritten into an
    invariant-factor chain via the Smith form of a diagonal matrix.
    """
    if rank < 0:
        raise ValueError("rank must be nonnegative")
    fs = [int(f) for f in factors]
    if any(f < 1 for f in fs):
        raise ValueError("torsion factors must be >= 1")
    fs = [f for f in fs if f > 1]
    if not fs:
        return FgAbelianGroup(rank, ())
    data = smith_invariants(IntMatrix.diagonal(fs))
    return FgAbelianGroup(rank, tuple(f for f in data.invariant_factors if f > 1))


def element_order_in_cokernel(matrix: IntMatrix, vector: Sequence[int]) -> Optional[int]:
    """Order of the class of `vector` in Z^cols / rowlattice(matrix).

    Returns None for infinite order.  Computed by comparing the torsion
    orders of the cokernel before and after adjoining the vector as an extra
    relation: quotienting by a cyclic subgroup of order q divides the torsion
    order by exactly q.
    """
    base = smith_invariants(matrix)
    extended = smith_invariants(matrix.with_row(vector))
    if extended.rank > base.rank:
        return None
    torsion_before = math.prod(base.invariant_factors)
    torsion_after = math.prod(extended.invariant_factors)
    return torsion_before // torsion_after
