import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import pi_cos_table, shift_table, two_minus_two_cos
from multspec.circulant import optimal_circulant_toeplitz
from multspec.errors import DomainError
from multspec.spectral import (
    SpectralSample,
    attraction_order,
    cluster_outliers,
    distribution_compare,
    range_membership,
    schatten_norm,
    sigma_mean,
    svd_threshold_split,
)
from multspec.structured import (
    circulant_eigenvalues,
    dense,
    eigen_decompose,
    hankel_from_coeffs,
    singular_values,
    toeplitz_from_coeffs,
)
from multspec.symbols import SymbolSpec


def eig_sample(vals):
    vals = np.asarray(vals)
    return SpectralSample(vals, "eigen", len(vals))


def opt_pi_cos(n):
    return optimal_circulant_toeplitz(toeplitz_from_coeffs(pi_cos_table(n - 1), n))


PI_COS = SymbolSpec(lambda s: np.pi * np.cos(s), name="pi cos")


class TestSample:
    def test_singular_must_be_nonnegative(self):
        with pytest.raises(DomainError):
            SpectralSample([1.0, -0.5], "singular", 2)

    def test_length_checked(self):
        with pytest.raises(DomainError):
            SpectralSample([1.0, 2.0, 3.0], "eigen", 2)
        SpectralSample([1.0, 2.0, 3.0, 4.0], "singular", 2, block_size=2)

    def test_grid_length_checked(self):
        with pytest.raises(DomainError):
            SpectralSample([1.0, 2.0], "eigen", 2, grid=[0.0])

    def test_unknown_kind(self):
        with pytest.raises(DomainError):
            SpectralSample([1.0], "other", 1)


class TestSigmaMean:
    def test_constant_spectrum(self):
        assert sigma_mean(eig_sample([1, 1, 1, 1]), lambda t: t) == 1

    def test_trace_of_laplacian(self):
        s = eigen_decompose(toeplitz_from_coeffs(two_minus_two_cos(3), 4), hermitian=True)
        assert sigma_mean(s, lambda t: t) == pytest.approx(2.0, abs=1e-14)

    def test_cesaro_eigenvalues_squared(self):
        n = 8
        s = circulant_eigenvalues(opt_pi_cos(n))
        j = np.arange(n)
        expected = np.sum(np.pi ** 2 * ((n - 1) / n) ** 2 * np.cos(2 * np.pi * j / n) ** 2) / n
        assert sigma_mean(s, lambda t: t ** 2) == pytest.approx(expected, rel=1e-13)

    def test_empty(self):
        with pytest.raises(DomainError):
            sigma_mean(SpectralSample([], "eigen", 0), lambda t: t)

    @given(st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=40), st.floats(-5, 5))
    def test_constant_function(self, vals, c):
        assert sigma_mean(eig_sample(vals), lambda t: np.full_like(t, c)) == pytest.approx(c)


class TestSchatten:
    def test_identity(self):
        s = singular_values(np.eye(4))
        assert schatten_norm(s, 2) == pytest.approx(2.0)
        assert schatten_norm(s, math.inf) == 1.0

    def test_hankel_trace_norm(self):
        H = dense(hankel_from_coeffs(pi_cos_table(14), 8))
        s = singular_values(H)
        assert schatten_norm(s, 1) == pytest.approx(np.linalg.svd(H, compute_uv=False).sum(), rel=1e-13)
        # H_8(pi cos) has the single nonzero pi/2 anti-diagonal i + j = 1
        assert schatten_norm(s, 1) == pytest.approx(np.pi, rel=1e-13)

    def test_p_below_one(self):
        with pytest.raises(DomainError):
            schatten_norm(singular_values(np.eye(2)), 0.5)

    def test_eigen_kind_rejected(self):
        with pytest.raises(DomainError):
            schatten_norm(eig_sample([1.0]), 2)

    def test_no_overflow(self):
        s = SpectralSample([1e200, 1e200], "singular", 2)
        assert schatten_norm(s, 4) == pytest.approx(1e200 * 2 ** 0.25)

    @given(st.lists(st.floats(0, 1e3), min_size=1, max_size=30),
           st.floats(1, 20), st.floats(1, 20))
    def test_monotone_in_p(self, vals, p, q):
        s = SpectralSample(vals, "singular", len(vals))
        lo, hi = sorted((p, q))
        assert schatten_norm(s, hi) <= schatten_norm(s, lo) * (1 + 1e-12) + 1e-300
        assert schatten_norm(s, math.inf) <= schatten_norm(s, lo) * (1 + 1e-12) + 1e-300


class TestDistribution:
    def test_trace_identity(self):
        n = 64
        s = eigen_decompose(toeplitz_from_coeffs(two_minus_two_cos(n - 1), n), hermitian=True)
        sym = SymbolSpec(lambda x: 2 - 2 * np.cos(x))
        rep = distribution_compare(s, sym, lambda t: t)
        assert rep.abs_error <= 1e-12
        assert rep.abs_error == abs(rep.empirical_mean - rep.integral_value)

    def test_cesaro_squares(self):
        s = circulant_eigenvalues(opt_pi_cos(256))
        rep = distribution_compare(s, PI_COS, lambda t: t ** 2)
        assert rep.integral_value == pytest.approx(np.pi ** 2 / 2, rel=1e-12)
        assert rep.abs_error <= 0.05 * abs(rep.integral_value)
        assert not rep.non_normal

    def test_shift_singular_values(self):
        n = 32
        s = singular_values(toeplitz_from_coeffs(shift_table(n - 1), n))
        rep = distribution_compare(s, SymbolSpec(lambda x: np.exp(1j * x)), lambda t: t)
        assert rep.empirical_mean == pytest.approx((n - 1) / n, abs=1e-13)
        assert rep.integral_value == pytest.approx(1.0, abs=1e-13)
        assert rep.abs_error == pytest.approx(1 / 32, abs=1e-13)

    def test_non_normal_flag(self):
        s = eigen_decompose(toeplitz_from_coeffs(shift_table(7), 8))
        rep = distribution_compare(s, SymbolSpec(lambda x: np.exp(1j * x)), lambda t: t)
        assert rep.non_normal

    def test_quad_points(self):
        with pytest.raises(DomainError):
            distribution_compare(eig_sample([1.0]), PI_COS, lambda t: t, quad_points=1)

    def test_block_trace_form(self):
        sym = SymbolSpec(lambda x: np.stack([np.stack([np.ones_like(x), 0 * x], -1),
                                             np.stack([0 * x, np.cos(x)], -1)], -2), dims=(1, 2, 2))
        s = SpectralSample([1.0, 1.0], "singular", 1, block_size=2)
        rep = distribution_compare(s, sym, lambda t: t)
        # mean of {1, |cos|} over the period
        assert rep.integral_value == pytest.approx((1 + 2 / np.pi) / 2, rel=1e-6)

    def test_report_json(self):
        rep = distribution_compare(eig_sample([1.0, 3.0]), SymbolSpec(lambda x: 2 + 0 * x), lambda t: t)
        d = rep.to_dict()
        assert d["abs_error"] == 0 and d["order"] == 2 and d["kind"] == "eigen"


class TestRange:
    def test_zero_in_range_of_cos(self):
        s = circulant_eigenvalues(opt_pi_cos(128))
        assert range_membership(s, 0, 0.1).verdict == "member_within_eps"

    def test_far_point_excluded(self):
        s = circulant_eigenvalues(opt_pi_cos(128))
        assert range_membership(s, 10, 0.1).verdict == "excluded"

    def test_identity(self):
        rep = range_membership(eig_sample(np.ones(16)), 1, 0.01)
        assert rep.verdict == "member_within_eps" and rep.fraction_inside == 1

    def test_inconclusive(self):
        vals = np.zeros(1000)
        vals[:5] = 1.0
        assert range_membership(eig_sample(vals), 1.0, 0.1).verdict == "inconclusive"

    def test_open_disk(self):
        assert range_membership(eig_sample([0.1]), 0, 0.1).fraction_inside == 0

    def test_bad_eps(self):
        with pytest.raises(DomainError):
            range_membership(eig_sample([0.0]), 0, 0)

    @settings(max_examples=50)
    @given(st.floats(-2, 2), st.floats(0.05, 0.3))
    def test_sampled_diagonal(self, s, eps):
        # diagonal sampled from g(x) = x: the sampled range is [-1, 1]
        rep = range_membership(eig_sample(np.linspace(-1, 1, 2001)), s, eps)
        if abs(s) <= 1:
            assert rep.verdict == "member_within_eps"
        elif abs(s) >= 1 + eps:
            assert rep.verdict == "excluded" and rep.fraction_inside == 0


class TestClusters:
    def test_identity(self):
        assert cluster_outliers(eig_sample(np.ones(8)), [1], 0.5) == 0

    def test_single_outlier(self):
        vals = np.zeros(8)
        vals[-1] = 8
        assert cluster_outliers(eig_sample(vals), [0], 0.5) == 1

    def test_cesaro_on_curve(self):
        s = circulant_eigenvalues(opt_pi_cos(64))
        pts = list(np.pi * np.cos(np.linspace(0, np.pi, 33)))
        assert cluster_outliers(s, pts, 0.2) == 0

    def test_interval(self):
        assert cluster_outliers(eig_sample([-1.0, 0.5, 2.0, 3.0]), [(0, 2)], 0.5) == 2

    def test_empty_set(self):
        with pytest.raises(DomainError):
            cluster_outliers(eig_sample([1.0]), [], 0.1)


class TestAttraction:
    def test_laplacian(self):
        samples = [eigen_decompose(toeplitz_from_coeffs(two_minus_two_cos(n - 1), n), hermitian=True)
                   for n in (16, 32, 64)]
        assert attraction_order(samples, 0) == math.inf

    def test_identity(self):
        samples = [eig_sample(np.ones(n)) for n in (4, 8, 16)]
        assert attraction_order(samples, 1) == math.inf

    def test_single_zero(self):
        samples = [eig_sample(np.r_[0.0, np.ones(n - 1)]) for n in (4, 8, 16)]
        assert attraction_order(samples, 0) == 1

    def test_needs_three(self):
        with pytest.raises(DomainError):
            attraction_order([eig_sample([1.0]), eig_sample([1.0, 1.0])], 0)

    def test_increasing_orders(self):
        with pytest.raises(DomainError):
            attraction_order([eig_sample(np.ones(4))] * 3, 1)


class TestThresholdSplit:
    def test_zero(self):
        L, R = svd_threshold_split(np.zeros((3, 3)), 1)
        assert not L.any() and not R.any()

    def test_diagonal(self):
        L, R = svd_threshold_split(np.diag([3.0, 0.1]), 0.5)
        np.testing.assert_allclose(L, np.diag([0, 0.1]), atol=1e-15)
        np.testing.assert_allclose(R, np.diag([3.0, 0]), atol=1e-15)

    def test_hankel(self):
        H = dense(hankel_from_coeffs(pi_cos_table(30), 16))
        L, R = svd_threshold_split(H, 0.5)
        np.testing.assert_allclose(L + R, H, atol=1e-13)
        assert np.linalg.norm(L, 2) <= 0.5
        assert np.linalg.matrix_rank(R) == np.count_nonzero(np.linalg.svd(H, compute_uv=False) > 0.5)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1), st.floats(0.05, 3.0), st.sampled_from([1, 2, 3]))
    def test_counting_bound(self, seed, eps, p):
        A = np.random.default_rng(seed).standard_normal((8, 8))
        L, R = svd_threshold_split(A, eps)
        assert np.linalg.norm(L, 2) <= eps * (1 + 1e-12)
        rank = np.linalg.matrix_rank(R, tol=1e-10 * max(1.0, np.abs(A).max()))
        norm_p = schatten_norm(singular_values(A), p)
        assert rank * eps ** p <= norm_p ** p * (1 + 1e-12)
        np.testing.assert_allclose(L + R, A, atol=1e-12)
