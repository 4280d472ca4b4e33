"""Exact integer matrix algebra: Hermite/Smith normal forms and integer kernels.

All arithmetic uses Python's unbounded integers, so intermediate entry growth
during pivoting is harmless and there is no overflow path.  Matrices here are
tiny (automorphisms of low-dimensional tori), so clarity wins over speed.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix, stored row-major as nested tuples."""

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.entries)
        if not rows or not rows[0]:
            raise ValueError("matrix must have at least one row and one column")
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        object.__setattr__(self, "entries", rows)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(tuple((0,) * cols for _ in range(rows)))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch: {self.shape} @ {other.shape}")
        cols = list(zip(*other.entries))
        return IntMatrix(
            tuple(
                tuple(sum(a * b for a, b in zip(row, col)) for col in cols)
                for row in self.entries
            )
        )

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch: {self.shape} - {other.shape}")
        return IntMatrix(
            tuple(
                tuple(a - b for a, b in zip(r1, r2))
                for r1, r2 in zip(self.entries, other.entries)
            )
        )

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(tuple(zip(*self.entries)))

    def apply(self, vector) -> tuple[int, ...]:
        """Matrix-vector product over the integers."""
        if len(vector) != self.cols:
            raise ValueError("vector length does not match column count")
        return tuple(sum(a * x for a, x in zip(row, vector)) for row in self.entries)

    def determinant(self) -> int:
        """Exact determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant requires a square matrix")
        n = self.rows
        a = [list(r) for r in self.entries]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                pivot = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if pivot is None:
                    return 0
                a[k], a[pivot] = a[pivot], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
                a[i][k] = 0
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def is_unimodular(self) -> bool:
        return self.rows == self.cols and abs(self.determinant()) == 1

    def inverse_unimodular(self) -> "IntMatrix":
        """Exact inverse of a unimodular matrix (the HNF of such a matrix is I,
        so the accumulated row operations are the inverse)."""
        if not self.is_unimodular():
            raise ValueError("matrix is not unimodular")
        h, u = hermite_normal_form(self)
        if h.entries != IntMatrix.identity(self.rows).entries:
            raise AssertionError("HNF of a unimodular matrix must be the identity")
        return u

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


@dataclass(frozen=True)
class LatticeBasis:
    """Basis of a sublattice of Z^dimension; vectors are rows, HNF-reduced."""

    dimension: int
    vectors: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        vecs = tuple(tuple(int(x) for x in v) for v in self.vectors)
        if any(len(v) != self.dimension for v in vecs):
            raise ValueError("basis vector length does not match dimension")
        object.__setattr__(self, "vectors", vecs)

    def __len__(self) -> int:
        return len(self.vectors)

    @property
    def is_trivial(self) -> bool:
        return not self.vectors


def _swap_rows(a, u, i, j):
    a[i], a[j] = a[j], a[i]
    u[i], u[j] = u[j], u[i]


def _row_sub(a, u, i, pivot, q):
    # row_i -= q * row_pivot, mirrored in the transform accumulator
    a[i] = [x - q * y for x, y in zip(a[i], a[pivot])]
    u[i] = [x - q * y for x, y in zip(u[i], u[pivot])]


def _negate_row(a, u, i):
    a[i] = [-x for x in a[i]]
    u[i] = [-x for x in u[i]]


def hermite_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form.

    Returns (H, U) with U @ m == H, U unimodular, H in echelon form with
    positive pivots and the entries above each pivot reduced into [0, pivot).
    Pivots are chosen by minimal absolute value to limit entry growth.
    """
    nr, nc = m.rows, m.cols
    h = [list(r) for r in m.entries]
    u = IntMatrix.identity(nr).to_lists()
    prow = 0
    for col in range(nc):
        if prow >= nr:
            break
        while True:
            nonzero = [i for i in range(prow, nr) if h[i][col] != 0]
            if not nonzero:
                break
            best = min(nonzero, key=lambda i: (abs(h[i][col]), i))
            if best != prow:
                _swap_rows(h, u, prow, best)
            for i in range(prow + 1, nr):
                if h[i][col] != 0:
                    _row_sub(h, u, i, prow, h[i][col] // h[prow][col])
            if all(h[i][col] == 0 for i in range(prow + 1, nr)):
                break
        if h[prow][col] == 0:
            continue
        if h[prow][col] < 0:
            _negate_row(h, u, prow)
        for i in range(prow):
            if h[i][col] != 0:
                _row_sub(h, u, i, prow, h[i][col] // h[prow][col])
        prow += 1
    return IntMatrix(tuple(tuple(r) for r in h)), IntMatrix(tuple(tuple(r) for r in u))


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form: returns (U, D, V) with U @ m @ V == D, U and V
    unimodular, and D diagonal with nonnegative entries d1 | d2 | ... ."""
    nr, nc = m.rows, m.cols
    a = [list(r) for r in m.entries]
    u = IntMatrix.identity(nr).to_lists()
    # V is accumulated by column operations; store its transpose as rows.
    vt = IntMatrix.identity(nc).to_lists()

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        vt[i], vt[j] = vt[j], vt[i]

    def col_sub(j, pivot, q):
        for row in a:
            row[j] -= q * row[pivot]
        vt[j] = [x - q * y for x, y in zip(vt[j], vt[pivot])]

    t = 0
    while t < min(nr, nc):
        if not any(a[i][j] for i in range(t, nr) for j in range(t, nc)):
            break
        while True:
            # move the smallest nonzero entry of column t / row t (or of the
            # whole submatrix on the first pass) into the pivot slot
            candidates = [(abs(a[i][j]), i, j)
                          for i in range(t, nr) for j in range(t, nc) if a[i][j] != 0]
            _, bi, bj = min(candidates)
            if bi != t:
                _swap_rows(a, u, t, bi)
            if bj != t:
                swap_cols(t, bj)
            for i in range(t + 1, nr):
                if a[i][t] != 0:
                    _row_sub(a, u, i, t, a[i][t] // a[t][t])
            for j in range(t + 1, nc):
                if a[t][j] != 0:
                    col_sub(j, t, a[t][j] // a[t][t])
            if any(a[i][t] for i in range(t + 1, nr)) or any(a[t][j] for j in range(t + 1, nc)):
                continue
            if a[t][t] < 0:
                _negate_row(a, u, t)
            # divisibility: the pivot must divide every remaining entry
            viol = next(((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc)
                         if a[i][j] % a[t][t] != 0), None)
            if viol is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[viol[0]])]
            u[t] = [x + y for x, y in zip(u[t], u[viol[0]])]
        t += 1
    d = IntMatrix(tuple(tuple(r) for r in a))
    v = IntMatrix(tuple(tuple(r) for r in vt)).transpose()
    return IntMatrix(tuple(tuple(r) for r in u)), d, v


def integer_kernel(m: IntMatrix) -> LatticeBasis:
    """Basis of {v in Z^cols : m @ v = 0}, HNF-reduced for determinism."""
    _, d, v = smith_normal_form(m)
    free = [
        j for j in range(m.cols)
        if j >= m.rows or d.entries[j][j] == 0
    ]
    if not free:
        return LatticeBasis(dimension=m.cols, vectors=())
    columns = tuple(tuple(v.entries[i][j] for i in range(m.cols)) for j in free)
    reduced, _ = hermite_normal_form(IntMatrix(columns))
    vectors = tuple(r for r in reduced.entries if any(r))
    return LatticeBasis(dimension=m.cols, vectors=vectors)


def lattice_contains(basis: LatticeBasis, vector) -> bool:
    """True iff vector is an integer combination of the basis vectors."""
    vec = [int(x) for x in vector]
    if len(vec) != basis.dimension:
        raise ValueError("vector length does not match lattice dimension")
    if not any(vec):
        return True
    if basis.is_trivial:
        return False
    reduced, _ = hermite_normal_form(IntMatrix(basis.vectors))
    for row in reduced.entries:
        pivot = next((j for j, x in enumerate(row) if x != 0), None)
        if pivot is None:
            continue
        q, r = divmod(vec[pivot], row[pivot])
        if r != 0:
            return False
        vec = [x - q * y for x, y in zip(vec, row)]
    return not any(vec)
