"""
Factored nuclear-norm solver

The lifted program min ||X||_* s.t. A(X) = y is solved through the
substitution X = H M^T,

    min ||H||_F^2 + ||M||_F^2  subject to  A(H M^T) = y,

with the method of multipliers: each outer iteration minimizes the
augmented Lagrangian with L-BFGS, then either moves the multipliers
(when the residual dropped enough) or grows the penalty.
"""
import logging
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from . import lbfgs
from ._helpers import DimensionMismatchError, UndefinedErrorSignal, as_rng, check_shape
from .signal import Spectrum, real_inner

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FactorPair:
    """
    Factors H (K x r) and M (N x r) of the candidate X = H M^T
    """
    H: np.ndarray
    M: np.ndarray

    def __post_init__(self):
        H = np.array(self.H, dtype=float, ndmin=2)
        M = np.array(self.M, dtype=float, ndmin=2)
        if H.shape[1] != M.shape[1] or H.shape[1] < 1:
            raise DimensionMismatchError('factor ranks differ: H {}, M {}'.format(H.shape, M.shape))
        object.__setattr__(self, 'H', H)
        object.__setattr__(self, 'M', M)

    @property
    def r(self):
        return self.H.shape[1]

    def lifted(self):
        return self.H @ self.M.T


@dataclass(frozen=True)
class SolverOptions:
    rank: int = 2
    penalty_init: float = 10.0
    penalty_growth: float = 10.0
    residual_improvement: float = 0.25
    inner_tolerance: float = 1e-8
    max_outer_iters: int = 50
    max_inner_iters: int = 1000
    lbfgs_memory: int = 10
    rank_deficiency_tol: float = 1e-3
    equality_tol: float = 1e-6
    slack_tol: float = 0.05
    hinge_tol: float = 1e-2
    max_penalty: float = 1e12

    def __post_init__(self):
        for item in fields(self):
            if not getattr(self, item.name) > 0:
                raise ValueError('solver option {} must be positive'.format(item.name))
        if not 0 < self.residual_improvement < 1:
            raise ValueError('residual_improvement must lie in (0, 1)')
        if self.penalty_growth <= 1:
            raise ValueError('penalty_growth must exceed 1')

    def as_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class TraceRow:
    outer: int
    inner_iters: int
    residual: float
    objective: float
    penalty: float
    multiplier_norm: float
    multipliers_updated: bool


@dataclass
class SolveResult:
    factors: FactorPair
    multipliers: np.ndarray
    final_residual: float
    outer_iters: int
    converged: bool
    rank_deficient: bool
    deficiency_ratio: float = 0.0
    trace: list = field(default_factory=list)


def _observation(y_hat, L):
    values = y_hat.values if isinstance(y_hat, Spectrum) else np.asarray(y_hat, dtype=complex)
    values = values.reshape(-1)
    if values.size != L:
        raise DimensionMismatchError('observation has length {}, operator has L={}'.format(
            values.size, L))
    return values


def augmented_lagrangian_value_and_gradient(op, y_hat, factors, multipliers, penalty):
    """
    Augmented Lagrangian of the factored program and its gradients

    value = ||H||^2 + ||M||^2 + Re<lambda, rho> + (penalty/2) ||rho||^2
    with rho = A(H M^T) - y

    Return
    ------
    (value, grad_H, grad_M)
    """
    y = _observation(y_hat, op.L)
    multipliers = np.asarray(multipliers, dtype=complex).reshape(-1)
    check_shape(multipliers, (op.L,), 'multipliers')
    H, M = factors.H, factors.M
    check_shape(H, (op.K, factors.r), 'H')
    check_shape(M, (op.N, factors.r), 'M')
    rho = op.apply_factored(H, M) - y
    value = (np.sum(H ** 2) + np.sum(M ** 2) + real_inner(multipliers, rho)
             + 0.5 * penalty * real_inner(rho, rho))
    dual = multipliers + penalty * rho
    grad_H = 2 * H + op.adjoint_right(dual, M)
    grad_M = 2 * M + op.adjoint_left(dual, H)
    return float(value), grad_H, grad_M


def _hinge_value_and_gradient(op, y, H, M, nu, penalty, delta):
    """
    ||H||^2 + ||M||^2 + nu g + (penalty/2) g^2 with g = max(0, ||rho|| - delta)
    """
    rho = op.apply_factored(H, M) - y
    res = np.linalg.norm(rho)
    g = max(0.0, res - delta)
    value = np.sum(H ** 2) + np.sum(M ** 2) + nu * g + 0.5 * penalty * g ** 2
    grad_H = 2 * H
    grad_M = 2 * M
    if g > 0:
        dual = (nu + penalty * g) * rho / res
        grad_H = grad_H + op.adjoint_right(dual, M)
        grad_M = grad_M + op.adjoint_left(dual, H)
    return float(value), grad_H, grad_M


def initial_factors(K, N, r, seed):
    """
    iid Normal(0, 1/sqrt(K+N)) factors
    """
    rng = as_rng(seed)
    scale = 1.0 / np.sqrt(K + N)
    return FactorPair(scale * rng.standard_normal((K, r)), scale * rng.standard_normal((N, r)))


def _inner_solve(objective, factors, opts):
    K, r = factors.H.shape

    def fun(z):
        H = z[:K * r].reshape(K, r)
        M = z[K * r:].reshape(-1, r)
        value, grad_H, grad_M = objective(H, M)
        return value, np.concatenate([grad_H.ravel(), grad_M.ravel()])

    z0 = np.concatenate([factors.H.ravel(), factors.M.ravel()])
    result = lbfgs.minimize(fun, z0, memory=opts.lbfgs_memory, tol=opts.inner_tolerance,
                            max_iter=opts.max_inner_iters)
    z = result.x
    return FactorPair(z[:K * r].reshape(K, r), z[K * r:].reshape(-1, r)), result


def _zero_result(op, opts):
    return SolveResult(factors=FactorPair(np.zeros((op.K, opts.rank)), np.zeros((op.N, opts.rank))),
                       multipliers=np.zeros(op.L, dtype=complex), final_residual=0.0,
                       outer_iters=0, converged=True, rank_deficient=True)


def _finish(op, y, scale, best, opts, outer, converged):
    """
    Undo the observation normalization and recompute the residual
    """
    factors, multipliers = best
    factors = FactorPair(np.sqrt(scale) * factors.H, np.sqrt(scale) * factors.M)
    final_residual = float(np.linalg.norm(op.apply_factored(factors.H, factors.M) - y))
    _, _, _, ratio = extract_rank1(factors)
    return SolveResult(factors=factors, multipliers=multipliers, final_residual=final_residual,
                       outer_iters=outer, converged=converged,
                       rank_deficient=ratio < opts.rank_deficiency_tol, deficiency_ratio=ratio)


def solve_equality(op, y_hat, opts=None, seed=0):
    """
    Minimize ||H||^2 + ||M||^2 subject to A(H M^T) = y

    The observation is scaled to unit norm internally, so solving
    from c*y returns factors of c times the lifted solution.

    Input
    -----
    op : MeasurementOp
    y_hat : Spectrum or array
        conjugate-symmetric observation
    opts : SolverOptions
    seed : int or Generator
        seeds the factor initialization

    Return
    ------
    SolveResult
        converged is False when the residual target was not reached
        within max_outer_iters; the best iterate is returned
    """
    opts = SolverOptions() if opts is None else opts
    y = _observation(y_hat, op.L)
    scale = float(np.linalg.norm(y))
    if scale == 0:
        return _zero_result(op, opts)
    y_n = y / scale
    factors = initial_factors(op.K, op.N, opts.rank, seed)
    multipliers = np.zeros(op.L, dtype=complex)
    penalty = opts.penalty_init
    reference = float(np.linalg.norm(op.apply_factored(factors.H, factors.M) - y_n))
    best_res = np.inf
    best = (factors, multipliers)
    trace = []
    converged = False
    outer = 0
    for outer in range(1, opts.max_outer_iters + 1):
        def objective(H, M):
            return augmented_lagrangian_value_and_gradient(
                op, y_n, FactorPair(H, M), multipliers, penalty)

        factors, inner = _inner_solve(objective, factors, opts)
        rho = op.apply_factored(factors.H, factors.M) - y_n
        res = float(np.linalg.norm(rho))
        if res < best_res:
            best_res, best = res, (factors, multipliers.copy())
        updated = res <= opts.residual_improvement * reference
        trace.append(TraceRow(outer=outer, inner_iters=inner.iterations, residual=res,
                              objective=inner.value, penalty=penalty,
                              multiplier_norm=float(np.linalg.norm(multipliers)),
                              multipliers_updated=updated))
        logger.debug('outer {}: residual {:.3e}, penalty {:.1e}, inner {}'.format(
            outer, res, penalty, inner.iterations))
        if res <= opts.equality_tol:
            converged = True
            best = (factors, multipliers.copy())
            break
        if updated:
            multipliers = multipliers + penalty * rho
            reference = res
        elif penalty * opts.penalty_growth > opts.max_penalty:
            break
        else:
            penalty *= opts.penalty_growth
    if not converged:
        logger.warning('Solver stopped after {} outer iterations with relative residual {:.3e}'.format(
            outer, best_res))
    result = _finish(op, y, scale, best, opts, outer, converged)
    result.trace = trace
    return result


def solve_noisy(op, y_hat, delta, opts=None, seed=0):
    """
    Minimize ||H||^2 + ||M||^2 subject to ||A(H M^T) - y|| <= delta

    The inequality is handled by the method of multipliers on the
    hinge g = max(0, ||rho|| - delta) with a scalar multiplier
    nu >= 0. delta = 0 is the equality program.

    Return
    ------
    SolveResult
        multipliers holds nu * rho / ||rho||; converged means
        ||rho|| <= delta * (1 + slack_tol) at exit
    """
    if delta < 0:
        raise ValueError('delta must be nonnegative')
    if delta == 0:
        return solve_equality(op, y_hat, opts, seed)
    opts = SolverOptions() if opts is None else opts
    y = _observation(y_hat, op.L)
    scale = float(np.linalg.norm(y))
    if scale <= delta:
        # the zero matrix is feasible and has the smallest norm
        return _zero_result(op, opts)
    y_n = y / scale
    delta_n = delta / scale
    factors = initial_factors(op.K, op.N, opts.rank, seed)
    nu = 0.0
    penalty = opts.penalty_init
    reference = max(0.0, float(np.linalg.norm(op.apply_factored(factors.H, factors.M) - y_n))
                    - delta_n)
    trace = []
    best_gap = np.inf
    best = (factors, np.zeros(op.L, dtype=complex))
    outer = 0
    for outer in range(1, opts.max_outer_iters + 1):
        def objective(H, M):
            return _hinge_value_and_gradient(op, y_n, H, M, nu, penalty, delta_n)

        factors, inner = _inner_solve(objective, factors, opts)
        rho = op.apply_factored(factors.H, factors.M) - y_n
        res = float(np.linalg.norm(rho))
        gap = max(0.0, res - delta_n)
        multipliers = nu * rho / res if res > 0 else np.zeros(op.L, dtype=complex)
        if gap <= best_gap:
            best_gap, best = gap, (factors, multipliers)
        updated = gap <= opts.residual_improvement * reference
        trace.append(TraceRow(outer=outer, inner_iters=inner.iterations, residual=res,
                              objective=inner.value, penalty=penalty, multiplier_norm=nu,
                              multipliers_updated=updated))
        logger.debug('outer {}: residual {:.3e} (bound {:.3e}), penalty {:.1e}'.format(
            outer, res, delta_n, penalty))
        if gap <= opts.hinge_tol * opts.slack_tol * delta_n:
            best = (factors, multipliers)
            break
        if updated:
            nu += penalty * gap
            reference = gap
        elif penalty * opts.penalty_growth > opts.max_penalty:
            break
        else:
            penalty *= opts.penalty_growth
    result = _finish(op, y, scale, best, opts, outer, False)
    result.converged = result.final_residual <= delta * (1 + opts.slack_tol)
    if not result.converged:
        logger.warning('Noisy solve ended with residual {:.3e} above bound {:.3e}'.format(
            result.final_residual, delta))
    result.trace = trace
    return result


def extract_rank1(f):
    """
    Best rank-1 approximation of H M^T from the r x r reduced SVD

    Return
    ------
    h, m : arrays
        sqrt(s1) u1 and sqrt(s1) v1, signed so that the first
        nonzero entry of h is positive
    s1 : float
    deficiency_ratio : float
        s2 / s1 (0 for zero factors or r = 1)
    """
    Qh, Rh = np.linalg.qr(f.H)
    Qm, Rm = np.linalg.qr(f.M)
    U, s, Vt = np.linalg.svd(Rh @ Rm.T)
    K, N = f.H.shape[0], f.M.shape[0]
    if s.size == 0 or s[0] == 0:
        return np.zeros(K), np.zeros(N), 0.0, 0.0
    u = Qh @ U[:, 0]
    v = Qm @ Vt[0]
    lead = np.flatnonzero(np.abs(u) > 1e-12 * np.max(np.abs(u)))[0]
    if u[lead] < 0:
        u, v = -u, -v
    root = np.sqrt(s[0])
    ratio = float(s[1] / s[0]) if s.size > 1 else 0.0
    return root * u, root * v, float(s[0]), ratio


def align_and_error(h_est, m_est, h, m):
    """
    Recovery errors up to the scalar ambiguity of h m^T

    Return
    ------
    err_h : ||h - alpha h_est|| / ||h|| with alpha = <h, h_est> / ||h_est||^2
    err_m : ||m - m_est / alpha|| / ||m|| (1 when alpha is 0)
    err_X : ||h_est m_est^T - h m^T||_F / ||h m^T||_F
    """
    h_est, m_est = np.asarray(h_est, dtype=float), np.asarray(m_est, dtype=float)
    h, m = np.asarray(h, dtype=float), np.asarray(m, dtype=float)
    if h_est.shape != h.shape or m_est.shape != m.shape:
        raise DimensionMismatchError('estimate and truth shapes differ')
    h_norm, m_norm = np.linalg.norm(h), np.linalg.norm(m)
    if h_norm == 0 or m_norm == 0:
        raise UndefinedErrorSignal('relative error against a zero ground truth')
    err_X = float(np.linalg.norm(np.outer(h_est, m_est) - np.outer(h, m)) / (h_norm * m_norm))
    energy = np.dot(h_est, h_est)
    alpha = np.dot(h, h_est) / energy if energy > 0 else 0.0
    err_h = float(np.linalg.norm(h - alpha * h_est) / h_norm)
    err_m = float(np.linalg.norm(m - m_est / alpha) / m_norm) if alpha != 0 else 1.0
    return err_h, err_m, err_X


TRACE_KEYS = ('outer', 'inner_iters', 'residual', 'objective', 'penalty', 'multiplier_norm',
              'multipliers_updated')


def format_trace(result):
    """
    Iteration trace as key=value lines, one per outer iteration
    """
    lines = []
    for row in result.trace:
        items = []
        for key in TRACE_KEYS:
            value = getattr(row, key)
            if isinstance(value, bool):
                value = int(value)
            items.append('{}={}'.format(key, value if isinstance(value, int) else
                                        '{:.10g}'.format(value)))
        lines.append(' '.join(items))
    return '\n'.join(lines) + ('\n' if lines else '')


def parse_trace(text):
    rows = []
    for line in text.splitlines():
        if not line.strip():
            continue
        items = dict(item.split('=', 1) for item in line.split())
        rows.append(TraceRow(outer=int(items['outer']), inner_iters=int(items['inner_iters']),
                             residual=float(items['residual']),
                             objective=float(items['objective']),
                             penalty=float(items['penalty']),
                             multiplier_norm=float(items['multiplier_norm']),
                             multipliers_updated=bool(int(items['multipliers_updated']))))
    return rows
