import numpy as np
import pytest

from blind_deconv._helpers import (DimensionMismatchError, NonUnitVectorError,
                                   RetriesExhaustedError, trial_rng)
from blind_deconv.operator import build_operator, vec
from blind_deconv.subspace import gen_gaussian_code, gen_identity_basis
from blind_deconv.theory import (TangentSpace, TheoryReport, adjointness_defect,
                                 build_certificate, certificate_gamma, check_expectation_identities,
                                 check_gram_bounds, check_operator_norm_bound,
                                 check_stability_bound, check_T_conditioning, dense_projector,
                                 gaussian_instance, golfing_summary, make_golfing_partition,
                                 partial_gram, planted_tangent_space, project_T, project_Tperp,
                                 projector_defect, run_theory_checks)


def tangent(K, N, seed):
    return planted_tangent_space(K, N, trial_rng(seed))


def test_tangent_space_needs_unit_vectors():
    with pytest.raises(NonUnitVectorError):
        TangentSpace(np.ones(3), np.array([1.0, 0.0]))


def test_projector_algebra():
    ts = tangent(5, 4, 0)
    X = trial_rng(0, 1).standard_normal((5, 4))
    PX = project_T(ts, X)
    np.testing.assert_allclose(project_T(ts, PX), PX, atol=1e-12)
    np.testing.assert_allclose(PX + project_Tperp(ts, X), X, atol=1e-12)
    np.testing.assert_allclose(project_T(ts, project_Tperp(ts, X)), 0, atol=1e-12)
    P_H, P_M = np.outer(ts.h, ts.h), np.outer(ts.m, ts.m)
    np.testing.assert_allclose(project_Tperp(ts, X), (np.eye(5) - P_H) @ X @ (np.eye(4) - P_M),
                               atol=1e-12)
    np.testing.assert_allclose(project_T(ts, ts.target()), ts.target(), atol=1e-12)
    assert projector_defect(ts, trial_rng(0, 2)) <= 1e-12


def test_dense_projector_matches_matrix_form():
    ts = tangent(4, 3, 1)
    P = dense_projector(ts)
    X = trial_rng(1, 1).standard_normal((4, 3))
    np.testing.assert_allclose(P @ vec(X), vec(project_T(ts, X)), atol=1e-12)
    np.testing.assert_allclose(P @ P, P, atol=1e-12)
    np.testing.assert_allclose(P, P.T, atol=1e-12)
    assert np.trace(P) == pytest.approx(4 + 3 - 1)


def test_adjointness_defect_is_tiny():
    op, _ = gaussian_instance(64, 6, 5, trial_rng(2))
    assert adjointness_defect(op, trial_rng(2, 1)) <= 1e-10


def test_golfing_partition_is_a_conditioned_partition():
    op, _ = gaussian_instance(4096, 4, 4, trial_rng(3))
    partition = make_golfing_partition(op, 8, seed=trial_rng(3, 1))
    assert partition.P == 8
    assert partition.Q == 512
    indices = np.concatenate(partition.subsets)
    np.testing.assert_array_equal(np.sort(indices), np.arange(4096))
    for subset, margin in zip(partition.subsets, partition.margins):
        assert margin <= len(subset) / (4 * 4096)
    assert partition.conditioning_margin == max(partition.margins)
    assert partition.attempts >= 1


def test_golfing_partition_remainder_goes_last():
    op, _ = gaussian_instance(100, 1, 2, trial_rng(4))
    partition = make_golfing_partition(op, 3, seed=0)
    assert [len(s) for s in partition.subsets] == [33, 33, 34]


def test_golfing_partition_gives_up():
    # subsets of 8 frequencies cannot condition a 16-dimensional B
    op, _ = gaussian_instance(64, 16, 2, trial_rng(5))
    with pytest.raises(RetriesExhaustedError):
        make_golfing_partition(op, 8, seed=0, max_retries=3)
    with pytest.raises(ValueError):
        make_golfing_partition(op, 0, seed=0)


def test_partial_gram_matches_rank_one_sum():
    op, _ = gaussian_instance(32, 3, 4, trial_rng(6))
    rng = trial_rng(6, 1)
    W = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
    subset = np.array([1, 5, 6, 20])
    expected = np.zeros((3, 4), dtype=complex)
    for k in subset:
        b, c = op.b_rows[k], op.c_rows[k]
        expected += np.outer(b, np.conj(b)) @ W @ np.outer(c, np.conj(c))
    np.testing.assert_allclose(partial_gram(op, subset, W), expected, atol=1e-10)


def test_certificate_trace_shape():
    op, ts = gaussian_instance(4096, 4, 4, trial_rng(7))
    partition = make_golfing_partition(op, 8, seed=trial_rng(7, 1))
    trace = build_certificate(op, ts, partition)
    assert len(trace.w_norms) == 9
    assert len(trace.mu) == 8
    assert len(trace.tperp_norms) == 9
    assert len(trace.deviation_norms) == 8
    assert trace.w_norms[0] == pytest.approx(1.0)
    assert trace.w_norms[-1] < trace.w_norms[0]
    assert trace.gamma == pytest.approx(certificate_gamma(4, 4096))
    assert trace.residual_bound == pytest.approx(1 / (4 * np.sqrt(2) * trace.gamma))
    assert trace.residual_ok == (trace.w_norms[-1] <= trace.residual_bound)
    assert trace.certificate.shape == (4, 4)


def test_certificate_checks_dimensions():
    op, _ = gaussian_instance(4096, 4, 4, trial_rng(8))
    partition = make_golfing_partition(op, 8, seed=0)
    with pytest.raises(DimensionMismatchError):
        build_certificate(op, tangent(3, 4, 0), partition)


def test_gamma_formula():
    assert certificate_gamma(8, 1024, alpha=1.0) == pytest.approx(np.sqrt(2 * 8 * np.log(1024)))


def test_T_conditioning_paths_agree():
    op, ts = gaussian_instance(128, 4, 4, trial_rng(9))
    dense = check_T_conditioning(op, ts)
    power = check_T_conditioning(op, ts, cap=0, iters=500, seed=1)
    assert power <= dense * (1 + 1e-9)
    assert power >= 0.98 * dense


@pytest.mark.parametrize('seed', [0, 1, 2])
def test_gram_bounds_inside_hypothesis(seed):
    op = build_operator(gen_identity_basis(128, 128), gen_gaussian_code(128, 128, seed))
    report = check_gram_bounds(op)
    assert report.in_hypothesis
    assert report.passed
    assert report.lower <= report.lambda_min <= report.lambda_max <= report.upper


@pytest.mark.parametrize('K, N', [(4, 4), (16, 16), (16, 32)])
def test_gram_bounds_make_no_claim_below_oversampling(K, N):
    for seed in range(3):
        op = build_operator(gen_identity_basis(256, K), gen_gaussian_code(256, N, seed))
        report = check_gram_bounds(op)
        assert not report.in_hypothesis
        assert report.passed is None
        assert report.inside_box == (report.lower <= report.lambda_min
                                     and report.lambda_max <= report.upper)


@pytest.mark.parametrize('seed', [0, 1, 2])
def test_operator_norm_below_bound(seed):
    op, _ = gaussian_instance(256, 8, 32, trial_rng(seed))
    report = check_operator_norm_bound(op, seed=seed)
    assert report.within_bound
    assert report.below_gamma
    assert report.bound == pytest.approx(np.sqrt(32 * (np.log(32 * 256 / 2) + np.log(256))))


def test_expectation_identities():
    v = np.array([0.5, -1.0, 2.0, 0.25])
    report = check_expectation_identities(4, samples=20000, seed=0, v=v)
    assert report.identity_ok
    assert report.quadratic_ok
    assert report.supported == 'norm-squared'
    assert report.quadratic_z_identity > 5


def test_expectation_identities_with_unit_v():
    report = check_expectation_identities(3, samples=10000, seed=1)
    assert report.supported == 'both'


def test_expectation_identities_need_samples():
    with pytest.raises(ValueError):
        check_expectation_identities(4, samples=100)


def test_theory_report():
    report = TheoryReport()
    report.add('adjoint identity', 'L=8', 2, 1.0, deterministic=True)
    report.add('golfing W decay', 'L=8', 2, 0.5, 'detail')
    assert not report.invariant_failed
    lines = report.to_text().splitlines()
    assert lines[0].split()[:4] == ['check', 'regime', 'seeds', 'pass_rate']
    assert len(lines) == 3
    assert report.records()[1] == ['golfing W decay', 'L=8', 2, 0.5, 'detail', 0]
    report.add('projector algebra', 'K=2', 2, 0.5, deterministic=True)
    assert report.invariant_failed


@pytest.mark.slow
def test_stability_error_is_linear_in_noise():
    op, ts = gaussian_instance(128, 4, 4, trial_rng(10))
    report = check_stability_bound(op, ts, trials=2, seed=0)
    assert report.errors[0] < report.errors[1] < report.errors[2]
    assert 0.7 <= report.slope <= 1.3


@pytest.mark.slow
def test_conditioning_on_T_over_fifty_seeds():
    passed = 0
    for s in range(50):
        op, ts = gaussian_instance(1024, 8, 8, trial_rng(0, 4, s))
        passed += check_T_conditioning(op, ts) <= 0.5
    assert passed >= 48


@pytest.mark.slow
def test_operator_norm_bound_over_fifty_seeds():
    for s in range(50):
        op, _ = gaussian_instance(256, 8, 32, trial_rng(0, 3, s))
        assert check_operator_norm_bound(op, seed=s).within_bound


@pytest.mark.slow
def test_expectation_identities_at_full_sample_size():
    report = check_expectation_identities(8, samples=100000, seed=3)
    assert report.identity_ok
    assert report.quadratic_ok
    assert report.supported == 'both'


@pytest.mark.slow
def test_golfing_decay_when_subsets_are_large():
    summary = golfing_summary(4096, 4, 4, 8, seeds=10, seed=0)
    assert summary.partitions_found >= 5
    assert summary.w_decay_rate >= 0.5


@pytest.mark.slow
def test_run_theory_checks_rows():
    report = run_theory_checks(seed=0, seeds=2, gram_seeds=2, golfing_seeds=2, mc_samples=10000,
                               max_retries=20)
    checks = {row.check for row in report.rows}
    for name in ('adjoint identity', 'projector algebra', 'operator norm bound',
                 'AA* eigenvalue box', 'conditioning on T', 'golfing W decay',
                 'certificate conditions', 'E[(cc*-I)^2] = N I'):
        assert name in checks
    assert not report.invariant_failed
