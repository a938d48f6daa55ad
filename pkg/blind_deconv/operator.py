"""
Lifted measurement operator A: K x N real matrices -> C^L

A(X)(l) = b_l^* X c_l, so that A(h m^T) = dft(Bh * Cm) for the
circular convolution of w = Bh and x = Cm. Vectorization of X is
column-major: dense column n*K + k (0-based) belongs to E_{k,n}.
"""
import logging
from dataclasses import dataclass

import numpy as np

from ._helpers import CapExceededError, DimensionMismatchError, as_rng, check_shape
from .signal import (REAL_ORIGIN, RealSignal, Spectrum, circular_convolve,
                     fourier_columns, inverse_fourier_columns)
from .subspace import SubspaceBasis, fourier_basis

logger = logging.getLogger(__name__)

DENSE_CAP = 4096
GRAM_CAP = 4096


@dataclass(frozen=True)
class MeasurementOp:
    """
    Lifted operator built from a pair of bases

    b_rows : L x K complex, row l is b_l
    c_rows : L x N complex, row l is c_l
    fast_path : True when B is an identity subset, so B X is a
        scatter and the operator needs no dense L x K product
    shape : signal shape for 2D (row-major) signals, None for 1D
    """
    B: SubspaceBasis
    C: SubspaceBasis
    b_rows: np.ndarray
    c_rows: np.ndarray
    fast_path: bool
    shape: tuple = None

    @property
    def L(self):
        return self.b_rows.shape[0]

    @property
    def K(self):
        return self.b_rows.shape[1]

    @property
    def N(self):
        return self.c_rows.shape[1]

    @property
    def dims(self):
        return self.L, self.K, self.N

    def _fourier_B(self, coefficients):
        """
        F B coefficients, the conjugate of b_rows @ coefficients for real input
        """
        if self.fast_path:
            return fourier_columns(self.B.embed(coefficients), self.shape)
        return np.conj(self.b_rows) @ coefficients

    def _adjoint_B(self, spectra):
        """
        B^T F^* spectra, equal to b_rows^T @ spectra
        """
        if self.fast_path:
            return inverse_fourier_columns(spectra, self.shape)[list(self.B.support)]
        return self.b_rows.T @ spectra

    def forward(self, X):
        """
        A(X) as a plain complex array
        """
        check_shape(X, (self.K, self.N), 'X')
        return np.sum(self._fourier_B(np.asarray(X, dtype=float)) * self.c_rows, axis=1)

    def backward(self, v):
        """
        A^*(v) = Re(sum_l v_l b_l c_l^*) as a K x N real array
        """
        v = np.asarray(v, dtype=complex).reshape(-1)
        if v.size != self.L:
            raise DimensionMismatchError('spectrum has length {}, operator has L={}'.format(
                v.size, self.L))
        return np.real(self._adjoint_B(v[:, None] * np.conj(self.c_rows)))

    def apply_factored(self, H, M):
        """
        A(H M^T) without forming the K x N product
        """
        H = np.atleast_2d(np.asarray(H, dtype=float).T).T
        M = np.atleast_2d(np.asarray(M, dtype=float).T).T
        check_shape(H, (self.K, H.shape[1]), 'H')
        check_shape(M, (self.N, H.shape[1]), 'M')
        return np.sum(self._fourier_B(H) * (self.c_rows @ M), axis=1)

    def adjoint_right(self, v, M):
        """
        A^*(v) M for an N x r factor M
        """
        v = np.asarray(v, dtype=complex).reshape(-1)
        return np.real(self._adjoint_B(v[:, None] * np.conj(self.c_rows @ M)))

    def adjoint_left(self, v, H):
        """
        A^*(v)^T H for a K x r factor H
        """
        v = np.asarray(v, dtype=complex).reshape(-1)
        b_h = np.conj(self._fourier_B(H))
        return np.real(np.conj(self.c_rows).T @ (v[:, None] * b_h))

    def time_domain(self, X):
        """
        Real observation sum_n (B X[:, n]) * C[:, n] for a lifted matrix X
        """
        check_shape(X, (self.K, self.N), 'X')
        W = self.B.embed(np.asarray(X, dtype=float))
        y = np.zeros(self.L)
        for n in range(self.N):
            y += circular_convolve(RealSignal(W[:, n]), RealSignal(self.C.columns[:, n]),
                                   self.shape).values
        return y


def build_operator(B, C, shape=None):
    """
    Lifted operator of the bases B (L x K) and C (L x N)

    Input
    -----
    B, C : SubspaceBasis
    shape : tuple, optional
        (L1, L2) for 2D signals flattened row-major; the 2D unitary
        DFT is used as F

    Return
    ------
    MeasurementOp
    """
    if B.L != C.L:
        raise DimensionMismatchError('B has {} rows, C has {}'.format(B.L, C.L))
    b_fourier = fourier_basis(B, 'B', shape)
    c_fourier = fourier_basis(C, 'C', shape)
    op = MeasurementOp(B=B, C=C, b_rows=b_fourier.rows, c_rows=c_fourier.rows,
                       fast_path=B.is_identity_subset, shape=b_fourier.shape)
    logger.debug('Built operator L={}, K={}, N={}, fast_path={}'.format(
        op.L, op.K, op.N, op.fast_path))
    return op


def apply(op, X):
    """
    Measurement spectrum A(X) of a K x N real matrix
    """
    return Spectrum(op.forward(X), origin=REAL_ORIGIN, shape=op.shape)


def adjoint(op, v):
    """
    A^*(v), the real K x N matrix with Re<A(X), v> = <X, A^*(v)>
    """
    values = v.values if isinstance(v, Spectrum) else v
    return op.backward(values)


def materialize_dense(op, cap=DENSE_CAP):
    """
    Dense L x KN matrix of the operator (column-major vec of X)
    """
    if op.K * op.N > cap:
        raise CapExceededError('K*N = {} exceeds the dense cap {}'.format(op.K * op.N, cap))
    blocks = np.conj(op.b_rows)[:, None, :] * op.c_rows[:, :, None]
    return blocks.reshape(op.L, op.N * op.K)


def vec(X):
    return np.asarray(X).reshape(-1, order='F')


def unvec(x, K, N):
    return np.asarray(x).reshape((K, N), order='F')


def gram_matrix(op, cap=GRAM_CAP):
    """
    L x L Gram matrix A A^* in the Fourier domain, (B B^*) . (L C C^*)
    with B, C the transformed bases
    """
    if op.L > cap:
        raise CapExceededError('L = {} exceeds the Gram cap {}'.format(op.L, cap))
    b_hat = np.conj(op.b_rows)
    return (b_hat @ op.b_rows.T) * (op.c_rows @ np.conj(op.c_rows).T)


def gram_spectrum(op, cap=GRAM_CAP, rel_tol=1e-10):
    """
    Extreme nonzero eigenvalues of A A^*

    Return
    ------
    (lambda_min, lambda_max) : tuple of float
        eigenvalues below rel_tol * lambda_max count as zero
    """
    eigenvalues = np.linalg.eigvalsh(gram_matrix(op, cap))
    lam_max = float(max(eigenvalues[-1], 0.0))
    if lam_max == 0.0:
        return 0.0, 0.0
    nonzero = eigenvalues[eigenvalues > rel_tol * lam_max]
    return float(nonzero[0]), lam_max


def operator_norm(op, iters=50, seed=0, return_trace=False):
    """
    Power-iteration estimate of ||A||

    The estimate after k steps is ||A x_k|| for the unit iterate x_k
    of the power method on A^*A; the running maximum is returned so
    that the estimate never decreases with iters.
    """
    if iters < 1:
        raise ValueError('iters must be at least 1')
    rng = as_rng(seed)
    x = rng.standard_normal((op.K, op.N))
    x /= np.linalg.norm(x)
    estimate = 0.0
    trace = []
    for _ in range(iters):
        y = op.forward(x)
        estimate = max(estimate, float(np.linalg.norm(y)))
        trace.append(estimate)
        x = op.backward(y)
        norm = np.linalg.norm(x)
        if norm == 0:
            break
        x /= norm
    logger.debug('Operator norm estimate {:.6g} after {} iterations'.format(estimate, len(trace)))
    if return_trace:
        return estimate, trace
    return estimate


def dense_operator_norm(op, cap=DENSE_CAP):
    """
    ||A|| from the dense matrix, for cross-checking operator_norm
    """
    dense = materialize_dense(op, cap)
    gram = np.real(np.conj(dense).T @ dense)
    return float(np.sqrt(max(np.linalg.eigvalsh(gram)[-1], 0.0)))
