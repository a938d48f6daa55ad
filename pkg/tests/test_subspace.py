import numpy as np
import pytest

from blind_deconv._helpers import DimensionMismatchError, NonUnitVectorError, trial_rng
from blind_deconv.subspace import (GAUSSIAN_CODE, HAAR_SUBSET, IDENTITY_FIRST, IDENTITY_RANDOM,
                                   ORTHONORMAL, SubspaceBasis, compute_coherence, fourier_basis,
                                   gen_gaussian_code, gen_identity_basis, gen_orthonormal_basis,
                                   make_basis, random_unit_vector)

from .oracle import direct_dft


def test_gaussian_code_statistics():
    C = gen_gaussian_code(512, 200, seed=0)
    assert C.kind == GAUSSIAN_CODE
    assert C.columns.shape == (512, 200)
    assert np.mean(C.columns ** 2) == pytest.approx(1 / 512, rel=0.05)
    assert abs(np.mean(C.columns)) < 1e-3


def test_gaussian_code_is_reproducible():
    np.testing.assert_array_equal(gen_gaussian_code(64, 8, 3).columns,
                                  gen_gaussian_code(64, 8, 3).columns)
    assert not np.array_equal(gen_gaussian_code(64, 8, 3).columns,
                              gen_gaussian_code(64, 8, 4).columns)


def test_identity_first_columns():
    B = gen_identity_basis(16, 4)
    assert B.kind == IDENTITY_FIRST
    assert B.support == (0, 1, 2, 3)
    np.testing.assert_array_equal(B.columns, np.eye(16)[:, :4])
    assert B.orthonormality_defect() == 0.0


def test_identity_random_subset():
    B = gen_identity_basis(32, 5, mode='random-subset', seed=1)
    assert B.kind == IDENTITY_RANDOM
    assert len(set(B.support)) == 5
    assert list(B.support) == sorted(B.support)
    np.testing.assert_array_equal(B.columns, np.eye(32)[:, list(B.support)])


def test_identity_random_subset_needs_seed():
    with pytest.raises(ValueError, match='needs a seed'):
        gen_identity_basis(32, 5, mode='random-subset')


@pytest.mark.parametrize('L, D', [(8, 9), (8, 0)])
def test_identity_dimensions_checked(L, D):
    with pytest.raises(DimensionMismatchError):
        gen_identity_basis(L, D)


def test_orthonormal_basis():
    B = gen_orthonormal_basis(40, 7, seed=2)
    assert B.kind == ORTHONORMAL
    assert B.orthonormality_defect() < 1e-10


def test_make_basis_dispatch():
    rng = trial_rng(0)
    assert make_basis(IDENTITY_FIRST, 16, 3, rng).kind == IDENTITY_FIRST
    assert make_basis(IDENTITY_RANDOM, 16, 3, rng).kind == IDENTITY_RANDOM
    assert make_basis(ORTHONORMAL, 16, 3, rng).kind == ORTHONORMAL
    assert make_basis(GAUSSIAN_CODE, 16, 3, rng).kind == GAUSSIAN_CODE
    with pytest.raises(ValueError):
        make_basis(HAAR_SUBSET, 16, 3, rng)


def test_basis_shape_validated():
    with pytest.raises(DimensionMismatchError):
        SubspaceBasis(np.ones((3, 4)), GAUSSIAN_CODE)
    with pytest.raises(ValueError):
        SubspaceBasis(np.ones((4, 3)), 'curvelet')


def test_embed_matches_matrix_product():
    coefficients = np.arange(1.0, 4.0)
    for B in (gen_identity_basis(10, 3, 'random-subset', 5), gen_orthonormal_basis(10, 3, 5)):
        np.testing.assert_allclose(B.embed(coefficients), B.columns @ coefficients, atol=1e-14)


def test_random_unit_vector():
    v = random_unit_vector(9, trial_rng(1))
    assert v.shape == (9,)
    assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-14)


def test_fourier_rows_of_both_roles():
    B = gen_orthonormal_basis(12, 3, seed=6)
    FB = np.stack([direct_dft(B.columns[:, k]) for k in range(3)], axis=1)
    np.testing.assert_allclose(fourier_basis(B, 'B').rows, np.conj(FB), atol=1e-12)
    np.testing.assert_allclose(fourier_basis(B, 'C').rows, np.sqrt(12) * FB, atol=1e-12)
    with pytest.raises(ValueError):
        fourier_basis(B, 'X')


def test_fourier_rows_form_a_tight_frame():
    B = gen_orthonormal_basis(64, 5, seed=7)
    assert fourier_basis(B, 'B').frame_defect() < 1e-10


def test_fourier_basis_shape_checked():
    with pytest.raises(DimensionMismatchError):
        fourier_basis(gen_identity_basis(12, 2), 'B', shape=(5, 2))


def test_coherence_of_identity_basis():
    L, K = 64, 8
    Bf = fourier_basis(gen_identity_basis(L, K), 'B')
    h = np.zeros(K)
    h[0] = 1.0
    report = compute_coherence(Bf, h)
    assert report.mu_max_sq == pytest.approx(1.0)
    assert report.mu_min_sq == pytest.approx(1.0)
    assert report.mu_h_sq == pytest.approx(1.0)
    flat = np.full(K, 1 / np.sqrt(K))
    assert compute_coherence(Bf, flat).mu_h_sq == pytest.approx(K)


def test_coherence_input_checks():
    Bf = fourier_basis(gen_identity_basis(16, 4), 'B')
    with pytest.raises(NonUnitVectorError):
        compute_coherence(Bf, np.ones(4))
    with pytest.raises(DimensionMismatchError):
        compute_coherence(Bf, np.ones(3) / np.sqrt(3))


def test_coherence_matches_loop_over_frequencies():
    L, K = 64, 8
    B = gen_orthonormal_basis(L, K, seed=11)
    h = random_unit_vector(K, trial_rng(11))
    FB = np.stack([direct_dft(B.columns[:, k]) for k in range(K)], axis=1)
    energies, projections = [], []
    for l in range(L):
        b = np.conj(FB[l])
        energies.append(np.vdot(b, b).real)
        projections.append(abs(np.vdot(b, h)) ** 2)
    report = compute_coherence(fourier_basis(B, 'B'), h)
    assert report.mu_max_sq == pytest.approx(L / K * max(energies), rel=1e-12)
    assert report.mu_min_sq == pytest.approx(L / K * min(energies), rel=1e-12)
    assert report.mu_h_sq == pytest.approx(L * max(projections), rel=1e-12)


@pytest.mark.slow
def test_coherence_report_stays_in_its_box():
    rng = trial_rng(12)
    draws = 0
    for L in (32, 64, 128):
        for _ in range(334):
            K = int(rng.integers(1, L // 2 + 1))
            kind = (IDENTITY_FIRST, IDENTITY_RANDOM, ORTHONORMAL)[draws % 3]
            B = make_basis(kind, L, K, rng)
            report = compute_coherence(fourier_basis(B, 'B'), random_unit_vector(K, rng))
            assert 1 - 1e-9 <= report.mu_max_sq <= L / K + 1e-9
            assert 0 <= report.mu_min_sq <= 1 + 1e-9
            assert report.mu_min_sq <= report.mu_max_sq
            assert 1 - 1e-9 <= report.mu_h_sq <= report.mu_max_sq * K + 1e-9
            draws += 1
    assert draws >= 1000


@pytest.mark.slow
def test_gaussian_code_fourier_rows_are_circular():
    L = 2048
    C = gen_gaussian_code(L, 500, seed=7)
    assert np.var(C.columns) == pytest.approx(1 / L, rel=0.1)
    rows = fourier_basis(C, 'C').rows[1:L // 2]
    assert np.mean(rows.real ** 2) == pytest.approx(0.5, rel=0.1)
    assert np.mean(rows.imag ** 2) == pytest.approx(0.5, rel=0.1)
