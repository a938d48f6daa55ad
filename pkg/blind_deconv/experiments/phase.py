"""
Phase-transition diagrams: empirical recovery rate over a (K, N) grid
"""
import logging
from dataclasses import dataclass

import numpy as np

from .._helpers import trial_rng
from ..solver import SolverOptions, align_and_error, extract_rank1, solve_equality
from ..subspace import GAUSSIAN_CODE, IDENTITY_FIRST
from ._io import run_tasks, summarize
from .instances import make_planted

logger = logging.getLogger(__name__)

PHASE_TAG = 1

RECORD_FIELDS = ['L', 'K', 'N', 'trial', 'err_X', 'converged', 'success']
SUMMARY_FIELDS = ['L', 'K', 'N', 'trials', 'success_rate', 'mean_err_X', 'median_err_X']


@dataclass(frozen=True)
class PhaseGridSpec:
    L: int
    K_values: tuple
    N_values: tuple
    trials_per_cell: int = 25
    B_kind: str = IDENTITY_FIRST
    C_kind: str = GAUSSIAN_CODE
    success_threshold: float = 0.02
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.success_threshold < 1:
            raise ValueError('success_threshold must lie in (0, 1)')
        if self.trials_per_cell < 1:
            raise ValueError('trials_per_cell must be at least 1')
        object.__setattr__(self, 'K_values', tuple(int(k) for k in self.K_values))
        object.__setattr__(self, 'N_values', tuple(int(n) for n in self.N_values))
        for K in self.K_values:
            for N in self.N_values:
                if not (1 <= K <= self.L and 1 <= N <= self.L):
                    raise ValueError('cell K={}, N={} does not fit L={}'.format(K, N, self.L))


@dataclass
class PhaseResult:
    spec: PhaseGridSpec
    success: np.ndarray
    records: list

    def summary_rows(self):
        rows = []
        for i, K in enumerate(self.spec.K_values):
            for j, N in enumerate(self.spec.N_values):
                errors = [r[4] for r in self.records if r[1] == K and r[2] == N]
                stats = summarize(errors)
                rows.append([self.spec.L, K, N, len(errors), self.success[i, j], stats['mean'],
                             stats['median']])
        return rows


def planted_trial(L, K, N, B_kind, C_kind, rng, opts, solver_seed):
    """
    Solve one planted noiseless instance and return (err_X, converged)
    """
    instance = make_planted(L, K, N, B_kind, C_kind, rng)
    result = solve_equality(instance.op, instance.y_hat, opts, seed=solver_seed)
    h_est, m_est, _, _ = extract_rank1(result.factors)
    _, _, err_X = align_and_error(h_est, m_est, instance.h, instance.m)
    return err_X, result.converged


def phase_trial(spec, K, N, trial, opts):
    err_X, converged = planted_trial(spec.L, K, N, spec.B_kind, spec.C_kind,
                                     trial_rng(spec.seed, PHASE_TAG, K, N, trial), opts,
                                     trial_rng(spec.seed, PHASE_TAG, K, N, trial, 1))
    return err_X, converged


def run_phase_diagram(spec, opts=None, threads=1):
    """
    Success frequency of every (K, N) cell

    A trial succeeds when the relative error of the recovered lifted
    matrix is below spec.success_threshold; non-converged solves are
    kept and judged by the same rule. Every trial is keyed by
    (seed, K, N, trial), so any cell can be recomputed alone.

    Return
    ------
    PhaseResult
        success has shape (len(K_values), len(N_values))
    """
    opts = SolverOptions() if opts is None else opts
    tasks = [((K, N, t), (spec, K, N, t, opts))
             for K in spec.K_values for N in spec.N_values
             for t in range(spec.trials_per_cell)]
    logger.info('Running {} phase-diagram trials at L={}'.format(len(tasks), spec.L))
    results = run_tasks(phase_trial, tasks, threads)
    records = []
    success = np.zeros((len(spec.K_values), len(spec.N_values)))
    index_K = {K: i for i, K in enumerate(spec.K_values)}
    index_N = {N: j for j, N in enumerate(spec.N_values)}
    for (K, N, t), (err_X, converged) in results:
        ok = err_X < spec.success_threshold
        records.append([spec.L, K, N, t, err_X, converged, ok])
        success[index_K[K], index_N[N]] += ok
        logger.debug('K={} N={} trial={} err_X={:.3e}'.format(K, N, t, err_X))
    success /= spec.trials_per_cell
    return PhaseResult(spec=spec, success=success, records=records)
