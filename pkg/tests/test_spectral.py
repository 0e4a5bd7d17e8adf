"""Degrees, the normalized operator, eigendecomposition, powers, affinities."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import block_minmax
from kspectral import (
    KernelMatrix,
    ParameterError,
    PipelineConfig,
    SpectralDecomposition,
    VanishingSelfAffinityError,
    affinity_profile,
    blob_centers,
    calibrate_bandwidth,
    cluster_pipeline,
    degrees,
    eig_sym,
    embedding,
    gaussian_kernel,
    gen_blobs,
    matrix_power,
    normalized_operator,
    spectrum_report,
    squared_distances,
)


def random_kernel(seed, n=25, h=0.005):
    pts = np.random.default_rng(seed).normal(0.0, 1.0, (n, 2))
    d2 = squared_distances(pts)
    return gaussian_kernel(d2, calibrate_bandwidth(d2, h).beta)


class TestDegrees:
    def test_all_ones_kernel(self):
        K = KernelMatrix(entries=np.ones((4, 4)), beta=1.0)
        deg = degrees(K, 0.001)
        assert np.all(deg.values == 1.0)
        assert not deg.clamped.any()

    def test_outlier_row_clamped(self):
        entries = np.ones((4, 4))
        entries[0, :] = 1e-7
        entries[:, 0] = 1e-7
        deg = degrees(KernelMatrix(entries=entries, beta=1.0), 0.001)
        assert deg.values[0] == 0.001
        assert deg.clamped.tolist() == [True, False, False, False]

    def test_matches_scalar_row_means(self):
        K = random_kernel(12, n=5)
        deg = degrees(K, 1e-12)
        for i in range(5):
            ref = sum(K.entries[i]) / 5.0
            assert abs(deg.values[i] - ref) <= 1e-15


class TestNormalizedOperator:
    def test_all_ones_kernel_gives_quarter_entries(self):
        K = KernelMatrix(entries=np.ones((4, 4)), beta=1.0)
        M = normalized_operator(K, degrees(K, 0.001))
        assert np.all(M == 0.25)
        lam = eig_sym(M).eigenvalues
        assert abs(lam[0] - 1.0) <= 1e-14
        assert np.abs(lam[1:]).max() <= 1e-14

    def test_perron_identity_unclamped(self):
        for seed in (0, 1, 2):
            K = random_kernel(seed)
            deg = degrees(K, 0.001)
            assert not deg.clamped.any()
            M = normalized_operator(K, deg)
            root = np.sqrt(deg.values)
            assert np.abs(M @ root - root).max() <= 1e-12
            lam = eig_sym(M).eigenvalues
            assert abs(lam[0] - 1.0) <= 1e-10

    def test_top_eigenvalue_at_most_one_with_clamp(self):
        rng = np.random.default_rng(7)
        pts = np.concatenate([rng.normal(0, 1, (49, 2)), [[50.0, 50.0]]])
        d2 = squared_distances(pts)
        K = gaussian_kernel(d2, calibrate_bandwidth(d2, 0.005).beta)
        deg = degrees(K, 0.025)
        assert deg.clamped.any()
        lam = eig_sym(normalized_operator(K, deg)).eigenvalues
        assert lam[0] <= 1.0 + 1e-10

    def test_tight_blobs_have_three_leading_eigenvalues(self):
        pts = gen_blobs(blob_centers(3, 10.0), 10, 0.1, seed=4)
        d2 = squared_distances(pts)
        K = gaussian_kernel(d2, calibrate_bandwidth(d2, 0.005).beta)
        lam = eig_sym(normalized_operator(K, degrees(K, 0.001))).eigenvalues
        assert abs(lam[0] - 1.0) <= 1e-10
        assert lam[1] > 0.99
        assert lam[2] > 0.99

    def test_exact_symmetry(self):
        K = random_kernel(9)
        M = normalized_operator(K, degrees(K, 0.001))
        assert np.array_equal(M, M.T)

    def test_degree_size_mismatch(self):
        K = random_kernel(3, n=6)
        deg = degrees(K, 0.001)
        deg.values = deg.values[:-1]
        with pytest.raises(ParameterError):
            normalized_operator(K, deg)


class TestEigSym:
    def test_diagonal_matrix(self):
        dec = eig_sym(np.diag([3.0, 1.0, 2.0]))
        np.testing.assert_allclose(dec.eigenvalues, [3.0, 2.0, 1.0], atol=1e-14)

    def test_two_by_two_closed_form(self):
        dec = eig_sym(np.array([[0.5, 0.3], [0.3, 0.5]]))
        np.testing.assert_allclose(dec.eigenvalues, [0.8, 0.2], atol=1e-15)

    def test_reconstruction_20x20(self):
        rng = np.random.default_rng(20)
        A = rng.normal(0.0, 1.0, (20, 20))
        M = (A + A.T) / 2.0
        dec = eig_sym(M)
        recon = (dec.eigenvectors * dec.eigenvalues) @ dec.eigenvectors.T
        assert np.abs(recon - M).max() <= 1e-10

    def test_eigenvectors_orthonormal(self):
        dec = eig_sym(normalized_operator(
            random_kernel(13), degrees(random_kernel(13), 0.001)))
        V = dec.eigenvectors
        assert np.abs(V.T @ V - np.eye(V.shape[0])).max() <= 1e-12

    def test_descending_order(self):
        dec = eig_sym(np.diag(np.arange(10.0)))
        assert np.all(np.diff(dec.eigenvalues) <= 0.0)

    def test_rejects_asymmetric(self):
        M = np.array([[0.0, 1.0], [0.5, 0.0]])
        with pytest.raises(ParameterError, match="symmetric"):
            eig_sym(M)


def psd_matrix(seed, n):
    A = np.random.default_rng(seed).normal(0.0, 1.0, (n, n))
    M = A @ A.T
    return M / np.linalg.eigvalsh(M).max()


class TestMatrixPower:
    def test_m1_reproduces_input(self):
        M = psd_matrix(1, 12)
        dec = eig_sym(M)
        assert np.abs(matrix_power(dec, 1) - M).max() <= 1e-10

    def test_m2_matches_dense_multiply(self):
        M = psd_matrix(2, 15)
        dec = eig_sym(M)
        assert np.abs(matrix_power(dec, 2) - M @ M).max() <= 1e-9

    def test_m64_matches_repeated_squaring(self):
        M = psd_matrix(3, 30)
        dec = eig_sym(M)
        sq = M.copy()
        for _ in range(6):
            sq = sq @ sq
        assert np.abs(matrix_power(dec, 64) - sq).max() <= 1e-8

    def test_result_exactly_symmetric(self):
        dec = eig_sym(psd_matrix(4, 10))
        for m in (1, 3, 17):
            Mm = matrix_power(dec, m)
            assert np.array_equal(Mm, Mm.T)

    def test_huge_power_stays_finite(self):
        dec = eig_sym(psd_matrix(5, 8))
        Mm = matrix_power(dec, 10**6)
        assert np.all(np.isfinite(Mm))

    def test_rejects_m_below_one(self):
        dec = eig_sym(psd_matrix(6, 4))
        with pytest.raises(ParameterError):
            matrix_power(dec, 0)


class TestAffinityProfile:
    def test_diagonal_exactly_one(self):
        Mm = matrix_power(eig_sym(psd_matrix(7, 9)), 3)
        C = affinity_profile(Mm, 3).entries
        assert np.all(np.diagonal(C) == 1.0)

    def test_constant_blocks_renormalize_to_ones(self):
        Mm = np.zeros((5, 5))
        Mm[:3, :3] = 0.3
        Mm[3:, 3:] = 0.7
        C = affinity_profile(Mm, 2).entries
        expected = np.zeros((5, 5))
        expected[:3, :3] = 1.0
        expected[3:, 3:] = 1.0
        np.testing.assert_allclose(C, expected, atol=1e-15)
        # across-block zeros stay exact
        assert np.all(C[:3, 3:] == 0.0)

    def test_vanishing_diagonal_names_index(self):
        Mm = np.diag([1.0, 1e-301, 1.0])
        with pytest.raises(VanishingSelfAffinityError, match="index 1"):
            affinity_profile(Mm, 2)

    @given(st.integers(0, 10**6), st.integers(1, 30))
    @settings(max_examples=25, deadline=None)
    def test_entries_bounded_by_cauchy_schwarz(self, seed, m):
        K = random_kernel(seed, n=10, h=0.1)
        dec = eig_sym(normalized_operator(K, degrees(K, 0.001)))
        C = affinity_profile(matrix_power(dec, m), m).entries
        assert np.abs(C).max() <= 1.0 + 1e-12


class TestEmbedding:
    def test_full_width_gram_equals_affinity(self):
        pts = gen_blobs(blob_centers(3, 3.0), 20, 0.5, seed=1)
        run = cluster_pipeline(pts, PipelineConfig(h=0.2))
        coords, flagged = embedding(run.decomposition, run.m, run.decomposition.n)
        assert not flagged.any()
        gram = coords @ coords.T
        assert np.abs(gram - run.profile.entries).max() <= 1e-8

    def test_single_blob_rows_align_at_large_m(self):
        pts = gen_blobs(np.zeros((1, 2)), 80, 0.15, seed=2)
        run = cluster_pipeline(pts, PipelineConfig(h=0.5))
        assert run.clustering.c == 1
        coords, _ = embedding(run.decomposition, 50, 2)
        cosines = np.clip(coords @ coords.T, -1.0, 1.0)
        assert np.arccos(cosines).max() <= 1e-3

    def test_k2_on_three_coupled_blobs_forms_three_directions(self):
        truth = np.repeat(np.arange(3), 30)
        pts = gen_blobs(blob_centers(3, 3.0), 30, 0.5, seed=0)
        run = cluster_pipeline(pts, PipelineConfig(h=0.1))
        coords, flagged = embedding(run.decomposition, run.m, 2)
        assert not flagged.any()
        angles = np.arctan2(coords[:, 1], coords[:, 0])
        directions = []
        for g in range(3):
            a = angles[truth == g]
            mean_dir = np.arctan2(np.sin(a).mean(), np.cos(a).mean())
            deviations = np.abs(np.angle(np.exp(1j * (a - mean_dir))))
            assert deviations.max() <= 0.2
            directions.append(mean_dir)
        for i in range(3):
            for j in range(i + 1, 3):
                gap = abs(np.angle(np.exp(1j * (directions[i] - directions[j]))))
                assert gap >= 0.5

    def test_rows_unit_norm(self):
        dec = eig_sym(psd_matrix(8, 12))
        coords, flagged = embedding(dec, 4, 5)
        norms = np.linalg.norm(coords, axis=1)
        assert np.abs(norms[~flagged] - 1.0).max() <= 1e-12

    def test_flags_vanishing_rows(self):
        dec = SpectralDecomposition(
            eigenvalues=np.array([1.0, 0.0]),
            eigenvectors=np.eye(2),
        )
        coords, flagged = embedding(dec, 2, 2)
        assert flagged.tolist() == [False, True]
        np.testing.assert_array_equal(coords[1], [0.0, 0.0])

    def test_k_bounds_checked(self):
        dec = eig_sym(psd_matrix(9, 5))
        with pytest.raises(ParameterError):
            embedding(dec, 2, 6)


class TestSpectrumReport:
    def test_all_ones_kernel_is_rank_one(self):
        K = KernelMatrix(entries=np.ones((4, 4)), beta=1.0)
        dec = eig_sym(normalized_operator(K, degrees(K, 0.001)))
        table = spectrum_report(dec, 3, 4)
        assert abs(table[0, 0] - 1.0) <= 1e-12
        assert abs(table[1, 0]) <= 1e-12

    def test_m1_second_column_equals_first(self):
        K = random_kernel(30, n=15, h=0.1)
        dec = eig_sym(normalized_operator(K, degrees(K, 0.001)))
        table = spectrum_report(dec, 1, 10)
        np.testing.assert_array_equal(
            table[:, 1], np.clip(table[:, 0], 0.0, None))

    def test_three_blobs_leave_three_powered_survivors(self):
        pts = gen_blobs(blob_centers(3, 10.0), 100, 0.15, seed=0)
        run = cluster_pipeline(pts, PipelineConfig(h=0.2))
        table = spectrum_report(run.decomposition, run.m, 7)
        survivors = np.count_nonzero(table[:, 1] > 0.01 * table[0, 1])
        assert survivors == 3

    def test_row_count_capped_by_n(self):
        K = random_kernel(31, n=5, h=0.1)
        dec = eig_sym(normalized_operator(K, degrees(K, 0.001)))
        assert spectrum_report(dec, 2, 9).shape == (5, 3)

    def test_covariance_column_matches_direct_eig(self):
        K = random_kernel(32, n=12, h=0.1)
        dec = eig_sym(normalized_operator(K, degrees(K, 0.001)))
        m = 4
        table = spectrum_report(dec, m, 12)
        C = affinity_profile(matrix_power(dec, m), m).entries
        direct = eig_sym(C / 12.0).eigenvalues
        np.testing.assert_allclose(table[:, 2], direct, atol=1e-12)
