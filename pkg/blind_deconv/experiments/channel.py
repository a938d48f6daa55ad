"""
Channel protection: a message coded by a random L x N matrix passes
through an unknown multipath channel with known delay support; the
receiver recovers both message and channel from y = w * Cm.
"""
import logging
from dataclasses import dataclass

import numpy as np

from .._helpers import trial_rng
from ..operator import build_operator
from ..solver import SolverOptions, align_and_error, extract_rank1, solve_noisy
from ..subspace import gen_gaussian_code, identity_columns
from ._io import run_tasks, summarize
from .instances import PlantedInstance, noise_bound, noisy_observation

logger = logging.getLogger(__name__)

CHANNEL_TAG = 4

RECORD_FIELDS = ['trial', 'L', 'K', 'N', 'snr_db', 'err_m', 'err_h', 'err_X', 'support_energy',
                 'converged']


@dataclass
class ChannelReport:
    records: list
    success_threshold: float = 0.02

    def column(self, name):
        index = RECORD_FIELDS.index(name)
        return [r[index] for r in self.records]

    @property
    def message_success_rate(self):
        errors = self.column('err_m')
        return float(np.mean([e < self.success_threshold for e in errors]))

    def summary_rows(self):
        rows = []
        for name in ('err_m', 'err_h', 'err_X', 'support_energy'):
            stats = summarize(self.column(name))
            rows.append([name, len(self.records), stats['mean'], stats['median'], stats['p90'],
                         stats['stderr']])
        return rows


SUMMARY_FIELDS = ['quantity', 'trials', 'mean', 'median', 'p90', 'stderr']


def channel_trial(N, L, delay_support, snr_db, key, opts):
    rng = trial_rng(*key)
    B = identity_columns(L, delay_support)
    C = gen_gaussian_code(L, N, rng)
    op = build_operator(B, C)
    # Gaussian fading taps and an arbitrary real message
    h = rng.standard_normal(B.D)
    m = rng.standard_normal(N)
    instance = PlantedInstance(op=op, h=h, m=m, y_hat=op.apply_factored(h, m))
    y_hat, sigma, _ = noisy_observation(instance, snr_db, rng)
    result = solve_noisy(op, y_hat, noise_bound(sigma, L), opts, seed=trial_rng(*key, 1))
    h_est, m_est, _, _ = extract_rank1(result.factors)
    err_h, err_m, err_X = align_and_error(h_est, m_est, h, m)
    w_est = np.zeros(L)
    w_est[list(delay_support)] = h_est
    energy = float(np.dot(w_est, w_est))
    on_support = float(np.sum(w_est[list(delay_support)] ** 2))
    support_energy = on_support / energy if energy > 0 else 0.0
    return err_m, err_h, err_X, support_energy, result.converged


def run_channel_sim(N, K, L, delay_support=None, snr_dB=float('inf'), trials=10, seed=0,
                    opts=None, threads=1):
    """
    Simulate coded transmission over a sparse multipath channel

    Input
    -----
    delay_support : sequence of int, optional
        0-based channel delays (K of them); defaults to the first K.
        K=0 without a support is treated as the single tap (0,)
    snr_dB : float
        inf for a noiseless channel

    Return
    ------
    ChannelReport
        message and channel errors after scale alignment
    """
    opts = SolverOptions() if opts is None else opts
    if K == 0 and delay_support is None:
        logger.info('K=0 given, using a single tap at delay 0')
        K = 1
    delay_support = tuple(range(K)) if delay_support is None else tuple(int(d) for d in delay_support)
    if len(delay_support) != K:
        raise ValueError('delay support has {} entries, expected K={}'.format(
            len(delay_support), K))
    tasks = [(t, (N, L, delay_support, snr_dB, (seed, CHANNEL_TAG, t), opts))
             for t in range(trials)]
    records = []
    for t, (err_m, err_h, err_X, energy, converged) in run_tasks(channel_trial, tasks, threads):
        records.append([t, L, K, N, snr_dB, err_m, err_h, err_X, energy, converged])
        logger.debug('trial {}: err_m={:.3e} err_h={:.3e}'.format(t, err_m, err_h))
    return ChannelReport(records=records)
