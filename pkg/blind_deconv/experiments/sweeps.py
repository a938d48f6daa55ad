"""
Noise and oversampling sweeps

Each point solves the noisy program with the bound
delta = sqrt(L + sqrt(4L)) sigma and records the relative error of
the recovered lifted matrix.
"""
import logging
from dataclasses import dataclass

import numpy as np

from .._helpers import trial_rng
from ..solver import SolverOptions, align_and_error, extract_rank1, solve_noisy
from ..subspace import GAUSSIAN_CODE, IDENTITY_FIRST
from ._io import run_tasks, summarize
from .instances import make_planted, noise_bound, noisy_observation

logger = logging.getLogger(__name__)

NOISE_TAG = 2
OVERSAMPLING_TAG = 3

RECORD_FIELDS = ['axis', 'value', 'trial', 'L', 'K', 'N', 'snr_db', 'sigma', 'delta', 'err_X',
                 'converged']


@dataclass
class SweepResult:
    """
    One record per (axis value, trial); summary is recomputed from them
    """
    axis: str
    values: tuple
    records: list

    def errors_at(self, value):
        return [r[9] for r in self.records if r[1] == value]

    def summary(self):
        return [(value, summarize(self.errors_at(value))) for value in self.values]

    def summary_rows(self):
        rows = []
        for value, stats in self.summary():
            rows.append([self.axis, value, len(self.errors_at(value)), stats['mean'],
                         stats['median'], stats['p90'], stats['stderr']])
        return rows


SUMMARY_FIELDS = ['axis', 'value', 'trials', 'mean_err_X', 'median_err_X', 'p90_err_X',
                  'stderr_err_X']


def noisy_trial(L, K, N, snr_db, B_kind, C_kind, key, opts):
    """
    One planted instance observed at snr_db

    Return
    ------
    (sigma, delta, err_X, converged)
    """
    rng = trial_rng(*key)
    instance = make_planted(L, K, N, B_kind, C_kind, rng)
    y_hat, sigma, _ = noisy_observation(instance, snr_db, rng)
    delta = noise_bound(sigma, L)
    result = solve_noisy(instance.op, y_hat, delta, opts, seed=trial_rng(*key, 1))
    h_est, m_est, _, _ = extract_rank1(result.factors)
    _, _, err_X = align_and_error(h_est, m_est, instance.h, instance.m)
    return sigma, delta, err_X, result.converged


def run_noise_sweep(L, K, N, snr_list_dB, trials, seed, opts=None, threads=1,
                    B_kind=IDENTITY_FIRST, C_kind=GAUSSIAN_CODE):
    """
    Relative error against SNR (dB); an infinite SNR is the noiseless case
    """
    opts = SolverOptions() if opts is None else opts
    snr_list_dB = tuple(float(s) for s in snr_list_dB)
    tasks = [((i, t), (L, K, N, snr, B_kind, C_kind, (seed, NOISE_TAG, i, t), opts))
             for i, snr in enumerate(snr_list_dB) for t in range(trials)]
    logger.info('Running noise sweep over {} SNR levels, {} trials each'.format(
        len(snr_list_dB), trials))
    records = []
    for (i, t), (sigma, delta, err_X, converged) in run_tasks(noisy_trial, tasks, threads):
        records.append(['snr_db', snr_list_dB[i], t, L, K, N, snr_list_dB[i], sigma, delta,
                        err_X, converged])
    return SweepResult(axis='snr_db', values=snr_list_dB, records=records)


def run_oversampling_sweep(K, N, L_values, snr_dB, trials, seed, opts=None, threads=1,
                           B_kind=IDENTITY_FIRST, C_kind=GAUSSIAN_CODE):
    """
    Relative error against the signal length L at fixed SNR

    Trials are keyed by L, so repeated L values give identical records.
    """
    opts = SolverOptions() if opts is None else opts
    L_values = tuple(int(L) for L in L_values)
    for L in L_values:
        if L < K + N:
            logger.warning('L={} is below K+N={}, recovery is not expected'.format(L, K + N))
    tasks = [((i, t), (L, K, N, snr_dB, B_kind, C_kind, (seed, OVERSAMPLING_TAG, L, t), opts))
             for i, L in enumerate(L_values) for t in range(trials)]
    records = []
    for (i, t), (sigma, delta, err_X, converged) in run_tasks(noisy_trial, tasks, threads):
        L = L_values[i]
        records.append(['L', L, t, L, K, N, snr_dB, sigma, delta, err_X, converged])
    return SweepResult(axis='L', values=L_values, records=records)


def oversampling_lengths(K, N, ratios=(1.5, 2, 3, 4)):
    """
    L values at the given multiples of K + N
    """
    return tuple(int(np.ceil(r * (K + N))) for r in ratios)


def noise_amplitude_slope(result):
    """
    Least-squares slope of log mean error against log noise amplitude
    10^(-snr/20), over the finite SNR levels
    """
    amplitudes, errors = [], []
    for value, stats in result.summary():
        if np.isfinite(value) and stats['mean'] > 0:
            amplitudes.append(10 ** (-value / 20))
            errors.append(stats['mean'])
    if len(amplitudes) < 2:
        return float('nan')
    return float(np.polyfit(np.log(amplitudes), np.log(errors), 1)[0])
