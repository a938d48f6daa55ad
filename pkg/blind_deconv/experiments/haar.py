"""
Orthonormal 2D Haar transform with periodic boundaries and the
wavelet-subset bases built from it
"""
import numpy as np
import pywt

from .._helpers import DimensionMismatchError
from ..subspace import HAAR_SUBSET, SubspaceBasis

WAVELET = 'haar'
MODE = 'periodization'


def max_levels(shape):
    """
    Number of levels for which both dimensions stay divisible
    """
    levels = 0
    while all(s % 2 ** (levels + 1) == 0 for s in shape):
        levels += 1
    return levels


def _check_levels(shape, levels):
    if len(shape) != 2:
        raise DimensionMismatchError('expected a 2D image, got shape {}'.format(shape))
    if levels is None:
        levels = max_levels(shape)
    if levels < 1 or any(s % 2 ** levels for s in shape):
        raise DimensionMismatchError('image {} is not divisible by 2^{}'.format(shape, levels))
    return levels


def _slices(shape, levels):
    coeffs = pywt.wavedec2(np.zeros(shape), WAVELET, mode=MODE, level=levels)
    return pywt.coeffs_to_array(coeffs)[1]


def haar2d(img, levels=None):
    """
    Haar coefficients of an image arranged on a grid of the same shape

    Input
    -----
    img : 2D array
        dimensions divisible by 2^levels
    levels : int, optional
        decomposition depth, deepest possible by default

    Return
    ------
    array
        coefficient grid with the coarsest scaling coefficients
        in the top-left corner
    """
    img = np.asarray(img, dtype=float)
    levels = _check_levels(img.shape, levels)
    coeffs = pywt.wavedec2(img, WAVELET, mode=MODE, level=levels)
    return pywt.coeffs_to_array(coeffs)[0]


def ihaar2d(grid, levels=None):
    """
    Inverse of haar2d
    """
    grid = np.asarray(grid, dtype=float)
    levels = _check_levels(grid.shape, levels)
    coeffs = pywt.array_to_coeffs(grid, _slices(grid.shape, levels), output_format='wavedec2')
    return pywt.waverec2(coeffs, WAVELET, mode=MODE)


def haar_basis_columns(shape, indices, levels=None):
    """
    L x N matrix whose columns are the Haar basis images of the given
    flat (row-major) coefficient indices, flattened row-major
    """
    levels = _check_levels(tuple(shape), levels)
    L = int(np.prod(shape))
    indices = np.asarray(indices, dtype=int)
    columns = np.empty((L, indices.size))
    unit = np.zeros(L)
    for j, index in enumerate(indices):
        unit[index] = 1.0
        columns[:, j] = ihaar2d(unit.reshape(shape), levels).reshape(-1)
        unit[index] = 0.0
    return columns


def gen_haar_subset_basis(shape, indices, levels=None):
    """
    Haar-wavelet-subset basis for the given coefficient indices
    """
    indices = np.asarray(indices, dtype=int)
    L = int(np.prod(shape))
    if indices.size == 0 or np.unique(indices).size != indices.size or \
            indices.min() < 0 or indices.max() >= L:
        raise DimensionMismatchError('wavelet indices must be distinct and below {}'.format(L))
    return SubspaceBasis(haar_basis_columns(shape, indices, levels), HAAR_SUBSET)


def top_coefficients(img, N, levels=None):
    """
    Flat indices of the N largest-magnitude Haar coefficients, sorted
    """
    grid = haar2d(img, levels).reshape(-1)
    order = np.argsort(-np.abs(grid), kind='stable')
    return np.sort(order[:N])


def coefficients_for_energy(img, fraction, levels=None):
    """
    Smallest N whose top-N Haar coefficients hold the given energy fraction
    """
    grid = haar2d(img, levels).reshape(-1)
    energy = np.sort(grid ** 2)[::-1]
    total = energy.sum()
    if total == 0:
        return 1
    cumulative = np.cumsum(energy) / total
    return int(min(np.searchsorted(cumulative, fraction) + 1, grid.size))
