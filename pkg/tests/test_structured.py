import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import exact_table, pi_cos_table, shift_table, two_minus_two_cos
from multspec.errors import DomainError, ResourceError
from multspec.structured import (
    DENSE_CAP,
    CirculantMatrix,
    circulant_eigenvalues,
    circulant_from_first_column,
    circulant_symbol_values,
    dense,
    eigen_decompose,
    fourier_grid,
    hankel_from_coeffs,
    matvec,
    singular_values,
    toeplitz_from_coeffs,
)
from multspec.symbols import FourierCoeffTable


def random_table(rng, radius, block=(1, 1), complex_=True):
    shape = tuple(2 * r + 1 for r in radius) + block
    c = rng.standard_normal(shape)
    if complex_:
        c = c + 1j * rng.standard_normal(shape)
    return FourierCoeffTable(c, radius)


class TestToeplitz:
    def test_laplacian(self):
        T = dense(toeplitz_from_coeffs(two_minus_two_cos(3), 4))
        ref = 2 * np.eye(4) - np.eye(4, k=1) - np.eye(4, k=-1)
        np.testing.assert_array_equal(T, ref)

    def test_shift_nilpotent(self):
        T = dense(toeplitz_from_coeffs(exact_table({1: 1.0, -1: 0.0}, 2), 3))
        # f_1 sits at i - j = 1
        np.testing.assert_array_equal(T, np.eye(3, k=-1))
        np.testing.assert_array_equal(np.linalg.matrix_power(T, 3), 0)

    def test_two_level_brute_force(self):
        t = FourierCoeffTable.from_dict({(1, 1): np.pi ** 2 / 4}, even=True)
        T = dense(toeplitz_from_coeffs(t, (2, 2)))
        ref = np.zeros((4, 4))
        for i1 in range(2):
            for i2 in range(2):
                for j1 in range(2):
                    for j2 in range(2):
                        a, b = i1 - j1, i2 - j2
                        ref[2 * i1 + i2, 2 * j1 + j2] = np.pi ** 2 / 4 if abs(a) == 1 and abs(b) == 1 else 0
        np.testing.assert_array_equal(T, ref)

    def test_identity(self):
        np.testing.assert_array_equal(dense(toeplitz_from_coeffs(exact_table({0: 1.0}, 2), 3)), np.eye(3))

    def test_insufficient(self):
        with pytest.raises(DomainError):
            toeplitz_from_coeffs(pi_cos_table(2), 4)

    def test_block_layout(self, rng):
        t = random_table(rng, (2,), block=(2, 3))
        T = dense(toeplitz_from_coeffs(t, 3))
        assert T.shape == (6, 9)
        for i in range(3):
            for j in range(3):
                np.testing.assert_array_equal(T[2 * i:2 * i + 2, 3 * j:3 * j + 3], t[i - j])


class TestHankel:
    def test_pi_cos(self):
        H = dense(hankel_from_coeffs(pi_cos_table(4), 3))
        ref = np.zeros((3, 3))
        ref[0, 1] = ref[1, 0] = np.pi / 2
        np.testing.assert_array_equal(H, ref)

    def test_shift_two(self):
        H = dense(hankel_from_coeffs(pi_cos_table(6), 3, shift=2))
        np.testing.assert_array_equal(H, 0)

    def test_laplacian(self):
        H = dense(hankel_from_coeffs(two_minus_two_cos(2), 2))
        np.testing.assert_array_equal(H, [[2, -1], [-1, 0]])

    def test_needs_tail(self):
        with pytest.raises(DomainError):
            hankel_from_coeffs(pi_cos_table(3), 3)
        with pytest.raises(DomainError):
            hankel_from_coeffs(pi_cos_table(6), 3, shift=-1)

    def test_mixed_levels(self, rng):
        t = random_table(rng, (4, 4))
        H = dense(hankel_from_coeffs(t, (3, 3), levels=(True, False)))
        for i1 in range(3):
            for i2 in range(3):
                for j1 in range(3):
                    for j2 in range(3):
                        assert H[3 * i1 + i2, 3 * j1 + j2] == t[i1 + j1, i2 - j2]


class TestCirculant:
    def test_scalar_matrix(self):
        s = circulant_eigenvalues(circulant_from_first_column([2.5, 0, 0, 0, 0]))
        np.testing.assert_allclose(s.values, 2.5)

    def test_two_term(self):
        n = 8
        a = np.zeros(n)
        a[1] = a[n - 1] = np.pi * (n - 1) / (2 * n)
        s = circulant_eigenvalues(circulant_from_first_column(a))
        x = 2 * np.pi * np.arange(n) / n
        np.testing.assert_allclose(s.values, np.pi * 7 / 8 * np.cos(x), atol=1e-14)
        np.testing.assert_allclose(s.grid[:, 0], x)
        assert s.normal

    def test_block_identity(self):
        col = np.zeros((2, 2, 2))
        col[0] = np.eye(2)
        s = circulant_eigenvalues(CirculantMatrix((2,), col), kind="singular")
        np.testing.assert_allclose(s.values, 1.0)
        assert s.block_size == 2 and len(s) == 4

    def test_dense_pattern(self):
        C = dense(circulant_from_first_column([1.0, 2.0, 3.0]))
        np.testing.assert_array_equal(C, [[1, 3, 2], [2, 1, 3], [3, 2, 1]])

    def test_cyclic_shift(self):
        np.testing.assert_array_equal(matvec(circulant_from_first_column([0, 1.0, 0, 0]), np.eye(4)[0]),
                                      np.eye(4)[1])

    def test_bad_shape(self):
        with pytest.raises(DomainError):
            CirculantMatrix((3,), np.zeros(4))

    def test_arithmetic(self):
        a = circulant_from_first_column([1.0, 2.0])
        b = circulant_from_first_column([0.5, 0.0])
        np.testing.assert_array_equal(dense(2 * a - b), 2 * dense(a) - dense(b))
        np.testing.assert_array_equal(dense(a + b), dense(a) + dense(b))

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1), st.sampled_from([(5,), (4, 3), (2, 2, 2)]))
    def test_fourier_diagonalization(self, seed, n):
        # C = F D F^* with F the unitary multilevel Fourier matrix
        rng = np.random.default_rng(seed)
        col = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        C = CirculantMatrix(n, col)
        grid = fourier_grid(n)
        N = grid.shape[0]
        idx = np.array(list(np.ndindex(*n)))
        F = np.exp(-1j * idx @ grid.T) / np.sqrt(N)
        lam = circulant_symbol_values(C).reshape(N)
        np.testing.assert_allclose(F @ np.diag(lam) @ F.conj().T, dense(C), atol=1e-12)

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1), st.integers(2, 12))
    def test_normality(self, seed, n):
        rng = np.random.default_rng(seed)
        C = circulant_from_first_column(rng.standard_normal(n) + 1j * rng.standard_normal(n))
        ev = circulant_eigenvalues(C)
        sv = singular_values(C)
        np.testing.assert_allclose(np.sort(np.abs(ev.values)), np.sort(sv.values), atol=1e-10)


class TestDenseAndMatvec:
    def test_cap(self):
        with pytest.raises(ResourceError):
            dense(toeplitz_from_coeffs(pi_cos_table(DENSE_CAP), DENSE_CAP + 1))
        with pytest.raises(ResourceError):
            dense(toeplitz_from_coeffs(pi_cos_table(9), 10), cap=8)

    def test_random_toeplitz(self, rng):
        T = toeplitz_from_coeffs(random_table(rng, (15,)), 16)
        v = rng.standard_normal(16)
        np.testing.assert_allclose(matvec(T, v), dense(T) @ v, atol=1e-12)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1), st.sampled_from([(4,), (3, 5), (2, 3, 2)]),
           st.sampled_from([(1, 1), (2, 2), (2, 3)]), st.sampled_from(["toeplitz", "hankel", "mixed", "circ"]),
           st.integers(0, 2))
    def test_matvec_agrees_with_dense(self, seed, n, block, kind, shift):
        rng = np.random.default_rng(seed)
        radius = tuple(2 * k + 2 for k in n)
        t = random_table(rng, radius, block)
        if kind == "toeplitz":
            A = toeplitz_from_coeffs(t, n)
        elif kind == "hankel":
            A = hankel_from_coeffs(t, n, shift=shift)
        elif kind == "mixed":
            levels = [bool(x) for x in rng.integers(0, 2, len(n))]
            A = hankel_from_coeffs(t, n, shift=shift, levels=levels)
        else:
            A = CirculantMatrix(n, rng.standard_normal(n + block))
        v = rng.standard_normal(A.shape[1]) + 1j * rng.standard_normal(A.shape[1])
        np.testing.assert_allclose(matvec(A, v), dense(A) @ v, atol=1e-10)

    def test_matvec_length(self):
        with pytest.raises(DomainError):
            matvec(toeplitz_from_coeffs(pi_cos_table(3), 4), np.ones(3))


class TestDecompositions:
    def test_sorted(self):
        np.testing.assert_array_equal(eigen_decompose(np.diag([3.0, 1.0, 2.0])).values, [1, 2, 3])

    def test_laplacian_closed_form(self):
        s = eigen_decompose(toeplitz_from_coeffs(two_minus_two_cos(3), 4), hermitian=True)
        j = np.arange(1, 5)
        np.testing.assert_allclose(s.values, np.sort(2 - 2 * np.cos(j * np.pi / 5)), atol=1e-14)

    def test_shift_singular(self):
        s = singular_values(toeplitz_from_coeffs(shift_table(2), 3))
        np.testing.assert_allclose(s.values, [1, 1, 0], atol=1e-15)

    def test_non_square(self):
        with pytest.raises(DomainError):
            eigen_decompose(np.ones((2, 3)))

    @pytest.mark.parametrize("n", [16, 64, 128])
    def test_laplacian_norm_bound(self, n):
        s = eigen_decompose(toeplitz_from_coeffs(two_minus_two_cos(n - 1), n), hermitian=True)
        assert s.values.max() < 4

    @pytest.mark.parametrize("p", [1, 2])
    def test_min_eigenvalue_ratio(self, p):
        lam = [eigen_decompose(toeplitz_from_coeffs(two_minus_two_cos(n - 1, power=p), n),
                               hermitian=True).values.min() for n in (64, 128)]
        assert lam[0] / lam[1] == pytest.approx(2 ** (2 * p), rel=0.15)
