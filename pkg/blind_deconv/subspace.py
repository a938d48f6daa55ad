"""
Subspace bases B (L x K) and C (L x N), their Fourier-domain rows
and the coherence statistics of the B subspace
"""
import logging
from dataclasses import dataclass

import numpy as np

from ._helpers import DimensionMismatchError, NonUnitVectorError, as_rng
from .signal import fourier_columns

logger = logging.getLogger(__name__)

IDENTITY_FIRST = 'identity-first'
IDENTITY_RANDOM = 'identity-random-subset'
ORTHONORMAL = 'orthonormal-general'
GAUSSIAN_CODE = 'gaussian-code'
HAAR_SUBSET = 'haar-wavelet-subset'

BASIS_KINDS = (IDENTITY_FIRST, IDENTITY_RANDOM, ORTHONORMAL, GAUSSIAN_CODE, HAAR_SUBSET)

ORTHONORMAL_TOL = 1e-10


@dataclass(frozen=True)
class SubspaceBasis:
    """
    L x D real basis matrix

    support holds the selected identity columns (0-based) for the
    identity kinds, which lets the lifted operator use its FFT path.
    """
    columns: np.ndarray
    kind: str
    support: tuple = None

    def __post_init__(self):
        if self.kind not in BASIS_KINDS:
            raise ValueError('unknown basis kind {}'.format(self.kind))
        columns = np.array(self.columns, dtype=float)
        if columns.ndim != 2 or columns.shape[1] > columns.shape[0] or columns.shape[1] < 1:
            raise DimensionMismatchError('basis must be L x D with 1 <= D <= L, got {}'.format(
                columns.shape))
        columns.setflags(write=False)
        object.__setattr__(self, 'columns', columns)
        if self.support is not None:
            object.__setattr__(self, 'support', tuple(int(i) for i in self.support))

    @property
    def L(self):
        return self.columns.shape[0]

    @property
    def D(self):
        return self.columns.shape[1]

    @property
    def is_identity_subset(self):
        return self.support is not None

    def orthonormality_defect(self):
        gram = self.columns.T @ self.columns
        return float(np.linalg.norm(gram - np.eye(self.D), 2))

    def embed(self, coefficients):
        """
        Time-domain signal B @ coefficients (coefficients may be D x r)
        """
        coefficients = np.asarray(coefficients)
        if self.is_identity_subset:
            out = np.zeros((self.L,) + coefficients.shape[1:], dtype=coefficients.dtype)
            out[list(self.support)] = coefficients
            return out
        return self.columns @ coefficients


@dataclass(frozen=True)
class FourierBasis:
    """
    Fourier-domain rows of a basis

    For the B role, row l is b_l = conj((F B)[l, :]) (column l of B^*);
    for the C role, row l is c_l = sqrt(L) (F C)[l, :].
    """
    rows: np.ndarray
    role: str
    shape: tuple = None

    @property
    def L(self):
        return self.rows.shape[0]

    @property
    def D(self):
        return self.rows.shape[1]

    def frame_defect(self):
        """
        Frobenius distance of sum_l b_l b_l^* from the identity
        """
        frame = self.rows.T @ np.conj(self.rows)
        return float(np.linalg.norm(frame - np.eye(self.D)))


@dataclass(frozen=True)
class CoherenceReport:
    mu_max_sq: float
    mu_min_sq: float
    mu_h_sq: float


def gen_gaussian_code(L, N, seed):
    """
    L x N coding matrix with iid Normal(0, 1/L) entries
    """
    if not 1 <= N <= L:
        raise DimensionMismatchError('need 1 <= N <= L, got L={}, N={}'.format(L, N))
    rng = as_rng(seed)
    return SubspaceBasis(rng.standard_normal((L, N)) / np.sqrt(L), GAUSSIAN_CODE)


def gen_identity_basis(L, D, mode='first', seed=None):
    """
    D distinct columns of the L x L identity

    Input
    -----
    mode : str
        'first' takes columns 1..D, 'random-subset' draws D sorted
        distinct columns from the seeded generator
    """
    if not 1 <= D <= L:
        raise DimensionMismatchError('need 1 <= D <= L, got L={}, D={}'.format(L, D))
    if mode == 'first':
        support = np.arange(D)
        kind = IDENTITY_FIRST
    elif mode in ('random-subset', IDENTITY_RANDOM):
        if seed is None:
            raise ValueError('identity mode {} needs a seed'.format(mode))
        support = np.sort(as_rng(seed).choice(L, size=D, replace=False))
        kind = IDENTITY_RANDOM
    else:
        raise ValueError('unknown identity mode {}'.format(mode))
    return identity_columns(L, support, kind)


def identity_columns(L, support, kind=IDENTITY_RANDOM):
    support = np.asarray(support, dtype=int)
    if np.unique(support).size != support.size or support.min() < 0 or support.max() >= L:
        raise DimensionMismatchError('identity support must be distinct indices below {}'.format(L))
    columns = np.zeros((L, support.size))
    columns[support, np.arange(support.size)] = 1.0
    return SubspaceBasis(columns, kind, support=tuple(support))


def gen_orthonormal_basis(L, D, seed):
    """
    Random L x D basis with orthonormal columns (QR of a Gaussian matrix)
    """
    if not 1 <= D <= L:
        raise DimensionMismatchError('need 1 <= D <= L, got L={}, D={}'.format(L, D))
    rng = as_rng(seed)
    q, r = np.linalg.qr(rng.standard_normal((L, D)))
    # fix the sign ambiguity of QR so the draw is Haar distributed
    q = q * np.sign(np.diag(r))
    return SubspaceBasis(q, ORTHONORMAL)


def make_basis(kind, L, D, seed):
    """
    Basis of a given kind, the dispatch used by experiments and the CLI
    """
    if kind == IDENTITY_FIRST:
        return gen_identity_basis(L, D, 'first')
    if kind == IDENTITY_RANDOM:
        return gen_identity_basis(L, D, 'random-subset', seed)
    if kind == ORTHONORMAL:
        return gen_orthonormal_basis(L, D, seed)
    if kind == GAUSSIAN_CODE:
        return gen_gaussian_code(L, D, seed)
    raise ValueError('basis kind {} cannot be generated from dimensions alone'.format(kind))


def random_unit_vector(D, rng):
    """
    Standard Gaussian vector normalized to unit length
    """
    v = rng.standard_normal(D)
    return v / np.linalg.norm(v)


def fourier_basis(basis, role, shape=None):
    """
    Fourier rows of a basis for the B or C role
    """
    columns = basis.columns if isinstance(basis, SubspaceBasis) else np.asarray(basis, dtype=float)
    if shape is not None and int(np.prod(shape)) != columns.shape[0]:
        raise DimensionMismatchError('shape {} does not match L={}'.format(shape, columns.shape[0]))
    spectra = fourier_columns(columns, shape)
    if role == 'B':
        rows = np.conj(spectra)
    elif role == 'C':
        rows = np.sqrt(columns.shape[0]) * spectra
    else:
        raise ValueError('role must be B or C')
    rows.setflags(write=False)
    return FourierBasis(rows, role, None if shape is None else tuple(shape))


def compute_coherence(B_fourier, h):
    """
    Coherences of the B subspace and of a unit vector h

    mu_max^2 = (L/K) max_l ||b_l||^2
    mu_min^2 = (L/K) min_l ||b_l||^2
    mu_h^2   = L max_l |<h, b_l>|^2
    """
    h = np.asarray(h, dtype=float)
    L, K = B_fourier.rows.shape
    if h.shape != (K,):
        raise DimensionMismatchError('h has shape {}, expected ({},)'.format(h.shape, K))
    if abs(np.linalg.norm(h) - 1.0) > 1e-10:
        raise NonUnitVectorError('h must have unit norm, got {}'.format(np.linalg.norm(h)))
    energy = np.sum(np.abs(B_fourier.rows) ** 2, axis=1)
    # <h, b_l> = b_l^* h
    projections = np.conj(B_fourier.rows) @ h
    return CoherenceReport(mu_max_sq=float(L / K * energy.max()),
                           mu_min_sq=float(L / K * energy.min()),
                           mu_h_sq=float(L * np.max(np.abs(projections) ** 2)))
