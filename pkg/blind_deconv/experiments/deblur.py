"""
Blind image deblurring with a known kernel support and a Haar
wavelet subspace for the image, lifted with the 2D unitary DFT
"""
import logging
from dataclasses import dataclass

import numpy as np

from .._helpers import DimensionMismatchError, relative_error, trial_rng
from ..operator import build_operator
from ..signal import circular_convolve, fourier_columns
from ..solver import SolverOptions, align_and_error, extract_rank1, solve_equality
from ..subspace import identity_columns
from .haar import coefficients_for_energy, gen_haar_subset_basis, top_coefficients

logger = logging.getLogger(__name__)

DEBLUR_TAG = 5

ORACLE = 'oracle'
ESTIMATED = 'top-N-of-blurred'
OBSERVE_IMAGE = 'image'
OBSERVE_MODEL = 'model'


@dataclass(frozen=True)
class Image2D:
    """
    L1 x L2 grid of pixel values in [0, 1]
    """
    pixels: np.ndarray

    def __post_init__(self):
        pixels = np.array(self.pixels, dtype=float)
        if pixels.ndim != 2:
            raise DimensionMismatchError('image must be 2D, got shape {}'.format(pixels.shape))
        if pixels.min() < 0 or pixels.max() > 1:
            raise ValueError('pixel values must lie in [0, 1]')
        pixels.setflags(write=False)
        object.__setattr__(self, 'pixels', pixels)

    @property
    def shape(self):
        return self.pixels.shape

    @property
    def L(self):
        return self.pixels.size


@dataclass
class DeblurResult:
    image: np.ndarray
    kernel: np.ndarray
    blurred: np.ndarray
    err_image: float
    err_kernel: float
    err_X: float
    support_energy: float
    converged: bool
    N: int


def box_kernel_support(shape, size=3):
    """
    Flat indices of a size x size box centred on pixel (0, 0), wrapping
    around the image edges
    """
    offsets = np.arange(size) - size // 2
    rows = np.mod(offsets, shape[0])
    cols = np.mod(offsets, shape[1])
    return np.sort((rows[:, None] * shape[1] + cols[None, :]).reshape(-1))


def _flat_support(support, shape):
    support = np.asarray(support, dtype=int)
    if support.ndim == 2:
        support = support[:, 0] * shape[1] + support[:, 1]
    L = shape[0] * shape[1]
    if support.size == 0 or support.min() < 0 or support.max() >= L:
        raise DimensionMismatchError('kernel support lies outside the {} image'.format(shape))
    return np.sort(support)


def run_deblur(img, kernel_support=None, wavelet_support=ORACLE, N=None, seed=0, kernel=None,
               energy_fraction=0.999, levels=None, observe=OBSERVE_IMAGE, opts=None):
    """
    Blur an image with a kernel on a known support and recover both

    Input
    -----
    img : Image2D or 2D array
    kernel_support : array, optional
        flat (row-major) pixel indices or (row, col) pairs; a 3 x 3 box
        around the origin by default
    wavelet_support : str
        'oracle' keeps the N largest Haar coefficients of the sharp
        image, 'top-N-of-blurred' those of the blurred one
    N : int, optional
        subspace size; by default the smallest N holding
        energy_fraction of the sharp image's Haar energy
    kernel : array, optional
        kernel values on the support, uniform by default
    observe : str
        'image' blurs the image itself, 'model' blurs its projection
        onto the wavelet subspace

    Return
    ------
    DeblurResult
        the estimate is normalized so the kernel sums to one
    """
    img = img if isinstance(img, Image2D) else Image2D(img)
    shape = img.shape
    support = _flat_support(box_kernel_support(shape) if kernel_support is None
                            else kernel_support, shape)
    K = support.size
    h = np.full(K, 1.0 / K) if kernel is None else np.asarray(kernel, dtype=float)
    if h.shape != (K,):
        raise DimensionMismatchError('kernel has {} values for {} support pixels'.format(
            h.size, K))
    B = identity_columns(img.L, support)
    w = B.embed(h)
    x = img.pixels.reshape(-1)
    if N is None:
        N = coefficients_for_energy(img.pixels, energy_fraction, levels)
    if not 1 <= N <= img.L:
        raise DimensionMismatchError('N={} out of range for L={}'.format(N, img.L))

    if wavelet_support == ORACLE:
        indices = top_coefficients(img.pixels, N, levels)
    elif wavelet_support == ESTIMATED:
        blurred_image = circular_convolve(w, x, shape).values.reshape(shape)
        indices = top_coefficients(blurred_image, N, levels)
    else:
        raise ValueError('unknown wavelet support mode {}'.format(wavelet_support))
    C = gen_haar_subset_basis(shape, indices, levels)
    m = C.columns.T @ x
    captured = float(np.dot(m, m) / np.dot(x, x)) if np.dot(x, x) > 0 else 1.0

    if observe == OBSERVE_IMAGE:
        observed = x
    elif observe == OBSERVE_MODEL:
        observed = C.columns @ m
    else:
        raise ValueError('unknown observation mode {}'.format(observe))
    blurred = circular_convolve(w, observed, shape).values
    op = build_operator(B, C, shape)
    y_hat = fourier_columns(blurred, shape)
    logger.info('Deblurring {} image with K={}, N={} ({} support)'.format(
        shape, K, N, wavelet_support))
    result = solve_equality(op, y_hat, opts or SolverOptions(), seed=trial_rng(seed, DEBLUR_TAG))
    h_est, m_est, _, _ = extract_rank1(result.factors)

    # a zero-sum kernel estimate leaves the scale unresolved
    scale = h_est.sum() if h_est.sum() != 0 else 1.0
    kernel_est = h_est / scale
    image_est = C.columns @ (m_est * scale)
    _, _, err_X = align_and_error(h_est, m_est, h, m)
    return DeblurResult(image=image_est.reshape(shape), kernel=B.embed(kernel_est).reshape(shape),
                        blurred=blurred.reshape(shape),
                        err_image=relative_error(image_est, x),
                        err_kernel=relative_error(kernel_est, h), err_X=err_X,
                        support_energy=captured, converged=result.converged, N=N)
