"""
Limited-memory BFGS with backtracking Armijo line search
"""
import logging
from collections import deque
from dataclasses import dataclass

import numpy as np

logger = logging.getLogger(__name__)


@dataclass
class LbfgsResult:
    x: np.ndarray
    value: float
    grad_norm: float
    iterations: int
    converged: bool


def two_loop(grad, pairs):
    """
    Apply the inverse Hessian approximation of the stored (s, y)
    pairs to grad; pairs are ordered oldest first
    """
    q = grad.copy()
    alphas = []
    for s, y, rho in reversed(pairs):
        a = rho * np.dot(s, q)
        alphas.append(a)
        q -= a * y
    if pairs:
        s, y, _ = pairs[-1]
        q *= np.dot(s, y) / np.dot(y, y)
    for (s, y, rho), a in zip(pairs, reversed(alphas)):
        b = rho * np.dot(y, q)
        q += (a - b) * s
    return q


def armijo(fun, x, f0, g0, d, alpha=1.0, tau=0.5, c1=1e-4, max_iter=60):
    """
    Backtracking line search for the sufficient decrease condition

    Return
    ------
    alpha, value, gradient at the accepted point, or alpha = 0
    when no step along d decreases the objective
    """
    slope = np.dot(g0, d)
    for _ in range(max_iter):
        f, g = fun(x + alpha * d)
        if np.isfinite(f) and f <= f0 + c1 * alpha * slope:
            return alpha, f, g
        alpha *= tau
    return 0.0, f0, g0


def minimize(fun, x0, memory=10, tol=1e-8, max_iter=1000):
    """
    Minimize a smooth function with L-BFGS

    Input
    -----
    fun : callable
        x -> (value, gradient) on flat float arrays
    x0 : array
        starting point
    memory : int
        number of curvature pairs kept
    tol : float
        stop once the gradient norm is at most tol

    Return
    ------
    LbfgsResult
    """
    x = np.array(x0, dtype=float)
    f, g = fun(x)
    pairs = deque(maxlen=memory)
    grad_norm = float(np.linalg.norm(g))
    iteration = 0
    while grad_norm > tol and iteration < max_iter:
        d = -two_loop(g, list(pairs))
        if np.dot(d, g) >= 0:
            # curvature information went stale, restart from steepest descent
            pairs.clear()
            d = -g
        alpha0 = 1.0 if pairs else min(1.0, 1.0 / grad_norm)
        alpha, f_new, g_new = armijo(fun, x, f, g, d, alpha=alpha0)
        if alpha == 0.0:
            if pairs:
                pairs.clear()
                continue
            logger.debug('Line search failed at gradient norm {:.3e}'.format(grad_norm))
            break
        s = alpha * d
        y = g_new - g
        sy = np.dot(s, y)
        if sy > 0:
            pairs.append((s, y, 1.0 / sy))
        x = x + s
        f, g = f_new, g_new
        grad_norm = float(np.linalg.norm(g))
        iteration += 1
    return LbfgsResult(x=x, value=float(f), grad_norm=grad_norm, iterations=iteration,
                       converged=grad_norm <= tol)
