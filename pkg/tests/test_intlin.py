from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaplabel.intlin import (
    IntMatrix,
    LatticeBasis,
    hermite_normal_form,
    integer_kernel,
    lattice_contains,
    smith_normal_form,
)


def _laplace_det(entries) -> int:
    # independent determinant oracle: cofactor expansion
    n = len(entries)
    if n == 1:
        return entries[0][0]
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in entries[1:]]
        total += (-1) ** j * entries[0][j] * _laplace_det(minor)
    return total


@st.composite
def int_matrices(draw, max_dim=5, bound=30):
    r = draw(st.integers(1, max_dim))
    c = draw(st.integers(1, max_dim))
    rows = draw(st.lists(
        st.lists(st.integers(-bound, bound), min_size=c, max_size=c),
        min_size=r, max_size=r))
    return IntMatrix(tuple(tuple(row) for row in rows))


class TestIntMatrix:
    def test_constructor_rejects_ragged(self):
        with pytest.raises(ValueError):
            IntMatrix(((1, 2), (3,)))

    def test_constructor_rejects_empty(self):
        with pytest.raises(ValueError):
            IntMatrix(())

    def test_matmul_and_identity(self):
        m = IntMatrix(((2, 1), (1, 1)))
        assert (IntMatrix.identity(2) @ m).entries == m.entries
        assert (m @ m).entries == ((5, 3), (3, 2))

    def test_determinant_examples(self):
        assert IntMatrix(((2, 1), (1, 1))).determinant() == 1
        assert IntMatrix(((1, 0), (1, 1))).determinant() == 1
        assert IntMatrix(((2, 4), (6, 8))).determinant() == -8
        assert IntMatrix.zeros(3, 3).determinant() == 0

    @given(int_matrices(max_dim=4, bound=9))
    def test_determinant_matches_cofactor_expansion(self, m):
        if m.rows != m.cols:
            return
        assert m.determinant() == _laplace_det(m.to_lists())

    def test_inverse_unimodular(self):
        m = IntMatrix(((2, 1), (1, 1)))
        inv = m.inverse_unimodular()
        assert (inv @ m).entries == IntMatrix.identity(2).entries
        assert (m @ inv).entries == IntMatrix.identity(2).entries

    def test_inverse_rejects_singular(self):
        with pytest.raises(ValueError):
            IntMatrix(((2, 0), (0, 2))).inverse_unimodular()


class TestHermite:
    def test_worked_example(self):
        m = IntMatrix(((2, 4), (6, 8)))
        h, u = hermite_normal_form(m)
        assert h.entries == ((2, 0), (0, 4))
        assert (u @ m).entries == h.entries
        assert abs(u.determinant()) == 1

    def test_identity_fixed(self):
        h, u = hermite_normal_form(IntMatrix.identity(3))
        assert h.entries == IntMatrix.identity(3).entries

    def test_zero_matrix(self):
        h, _ = hermite_normal_form(IntMatrix.zeros(2, 3))
        assert h.entries == IntMatrix.zeros(2, 3).entries

    @given(int_matrices())
    @settings(max_examples=150)
    def test_properties(self, m):
        h, u = hermite_normal_form(m)
        assert (u @ m).entries == h.entries
        assert abs(u.determinant()) == 1
        # echelon shape, positive pivots, reduced entries above
        prev_pivot_col = -1
        for row in h.entries:
            cols = [j for j, x in enumerate(row) if x != 0]
            if not cols:
                continue
            p = cols[0]
            assert p > prev_pivot_col
            assert row[p] > 0
            prev_pivot_col = p
        for i, row in enumerate(h.entries):
            cols = [j for j, x in enumerate(row) if x != 0]
            if not cols:
                continue
            p = cols[0]
            for k in range(i):
                assert 0 <= h.entries[k][p] < row[p]
        # idempotence
        h2, _ = hermite_normal_form(h)
        assert h2.entries == h.entries
        # the rows of m lie in the row lattice of h
        basis_rows = tuple(r for r in h.entries if any(r))
        basis = LatticeBasis(dimension=m.cols, vectors=basis_rows)
        for row in m.entries:
            assert lattice_contains(basis, row)


class TestSmith:
    def test_worked_example(self):
        m = IntMatrix(((2, 4), (6, 8)))
        u, d, v = smith_normal_form(m)
        assert d.entries == ((2, 0), (0, 4))
        assert (u @ m @ v).entries == d.entries

    def test_unimodular_input(self):
        u, d, v = smith_normal_form(IntMatrix(((1, 1), (1, 0))))
        assert d.entries == ((1, 0), (0, 1))

    @given(int_matrices())
    @settings(max_examples=150)
    def test_properties(self, m):
        u, d, v = smith_normal_form(m)
        assert (u @ m @ v).entries == d.entries
        assert abs(u.determinant()) == 1
        assert abs(v.determinant()) == 1
        diag = [d.entries[i][i] for i in range(min(m.rows, m.cols))]
        for i in range(m.rows):
            for j in range(m.cols):
                if i != j:
                    assert d.entries[i][j] == 0
        assert all(x >= 0 for x in diag)
        for a, b in zip(diag, diag[1:]):
            if a == 0:
                assert b == 0
            else:
                assert b % a == 0


def _brute_kernel(m: IntMatrix, height: int):
    grids = np.meshgrid(*[np.arange(-height, height + 1)] * m.cols, indexing="ij")
    vecs = np.stack([g.ravel() for g in grids], axis=1)
    prod = vecs @ np.array(m.entries).T
    return vecs[np.all(prod == 0, axis=1)]


class TestKernel:
    def test_hyperbolic_dual_has_no_fixed_vector(self):
        a = IntMatrix(((2, 1), (1, 1)))
        k = integer_kernel(a.transpose() - IntMatrix.identity(2))
        assert k.is_trivial

    def test_shear_fixed_vector(self):
        a = IntMatrix(((1, 0), (1, 1)))
        k = integer_kernel(a.transpose() - IntMatrix.identity(2))
        assert k.vectors == ((1, 0),)

    def test_zero_matrix_gives_standard_basis(self):
        k = integer_kernel(IntMatrix.zeros(3, 3))
        assert k.vectors == ((1, 0, 0), (0, 1, 0), (0, 0, 1))

    def test_wide_matrix(self):
        k = integer_kernel(IntMatrix(((1, 2, 3),)))
        assert len(k) == 2
        for v in k.vectors:
            assert sum(a * b for a, b in zip((1, 2, 3), v)) == 0

    @given(int_matrices(max_dim=4, bound=6))
    @settings(max_examples=100, deadline=None)
    def test_matches_brute_force(self, m):
        basis = integer_kernel(m)
        for v in basis.vectors:
            assert all(x == 0 for x in m.apply(v))
        hits = _brute_kernel(m, 3)
        for v in hits:
            assert lattice_contains(basis, tuple(int(x) for x in v))
        # the brute-force span cannot exceed the basis rank
        if len(hits) > 1:
            assert np.linalg.matrix_rank(hits) <= len(basis)


class TestLatticeContains:
    def test_examples(self):
        basis = LatticeBasis(dimension=2, vectors=((2, 0), (0, 3)))
        assert lattice_contains(basis, (4, -3))
        assert not lattice_contains(basis, (1, 0))
        assert lattice_contains(basis, (0, 0))

    def test_trivial_lattice(self):
        basis = LatticeBasis(dimension=2, vectors=())
        assert lattice_contains(basis, (0, 0))
        assert not lattice_contains(basis, (1, 0))

    def test_unreduced_basis_accepted(self):
        basis = LatticeBasis(dimension=2, vectors=((2, 3), (4, 5)))
        assert lattice_contains(basis, (6, 8))
        assert not lattice_contains(basis, (1, 0))
