"""
Signal containers, normalized DFT and circular convolution

Indexing: documentation follows the 1-based convention of the
recovery equations (sample l = 1..L, y[l] = sum_l' w[l'] x[l - l' + 1 mod L]);
arrays are 0-based, so sample l lives at array index l - 1.

The DFT used everywhere is the unitary one,
F(w, l) = exp(-j 2 pi (w-1)(l-1) / L) / sqrt(L),
which is numpy.fft with norm="ortho".
"""
from dataclasses import dataclass, field

import numpy as np

from ._helpers import DimensionMismatchError, SymmetryViolationError

REAL_ORIGIN = 'real-origin'
GENERAL = 'general'

SYMMETRY_TOL = 1e-9


@dataclass(frozen=True)
class RealSignal:
    """
    Real length-L signal (w, x or y of y = w * x)
    """
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float).reshape(-1)
        if values.size < 1:
            raise DimensionMismatchError('a signal needs at least one sample')
        if not np.all(np.isfinite(values)):
            raise ValueError('signal contains non-finite samples')
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)

    @property
    def L(self):
        return self.values.size

    def __len__(self):
        return self.values.size


@dataclass(frozen=True)
class Spectrum:
    """
    Frequency-domain vector of length L

    origin is REAL_ORIGIN when the spectrum belongs to a real
    signal (conjugate symmetric), GENERAL otherwise. shape is the
    signal shape for multidimensional signals flattened row-major.
    """
    values: np.ndarray
    origin: str = GENERAL
    shape: tuple = field(default=None)

    def __post_init__(self):
        values = np.array(self.values, dtype=complex).reshape(-1)
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)
        if self.origin not in (REAL_ORIGIN, GENERAL):
            raise ValueError('unknown spectrum origin {}'.format(self.origin))
        shape = (values.size,) if self.shape is None else tuple(self.shape)
        if int(np.prod(shape)) != values.size:
            raise DimensionMismatchError('shape {} does not match {} values'.format(
                shape, values.size))
        object.__setattr__(self, 'shape', shape)

    @property
    def L(self):
        return self.values.size

    def __len__(self):
        return self.values.size

    def symmetry_defect(self):
        """
        Largest deviation from conjugate symmetry
        """
        return symmetry_defect(self.values, self.shape)

    def check_symmetry(self, tol=SYMMETRY_TOL):
        """
        Raise SymmetryViolationError if a real-origin spectrum is
        not conjugate symmetric within tol (relative to its norm)
        """
        scale = max(1.0, float(np.linalg.norm(self.values)))
        defect = self.symmetry_defect()
        if defect > tol * scale:
            raise SymmetryViolationError(
                'spectrum violates conjugate symmetry by {:.3e}'.format(defect))
        return defect


def reflect(values, shape=None):
    """
    Index reflection l -> L - l + 2 (1-based), per axis for
    multidimensional signals
    """
    values = np.asarray(values)
    shape = (values.shape[0],) if shape is None else tuple(shape)
    grid = values.reshape(shape + values.shape[1:])
    axes = tuple(range(len(shape)))
    mirrored = np.roll(np.flip(grid, axis=axes), 1, axis=axes)
    return mirrored.reshape(values.shape)


def symmetry_defect(values, shape=None):
    values = np.asarray(values)
    if values.size == 0:
        return 0.0
    return float(np.max(np.abs(values - np.conj(reflect(values, shape)))))


def unitary_fft(values, axis=0):
    """
    Normalized DFT of an array along one axis
    """
    return np.fft.fft(values, axis=axis, norm='ortho')


def unitary_ifft(values, axis=0):
    return np.fft.ifft(values, axis=axis, norm='ortho')


def fourier_columns(matrix, shape=None):
    """
    Normalized DFT of each column of an L x D matrix

    For multidimensional signals (shape given) every column is
    reshaped row-major to shape and transformed along each axis in
    turn, i.e. the multidimensional DFT composed of 1D ones.
    """
    matrix = np.asarray(matrix)
    vector = matrix.ndim == 1
    if vector:
        matrix = matrix[:, None]
    if shape is None or len(shape) == 1:
        out = unitary_fft(matrix, axis=0)
    else:
        grid = matrix.reshape(tuple(shape) + (matrix.shape[1],))
        for axis in range(len(shape)):
            grid = unitary_fft(grid, axis=axis)
        out = grid.reshape(matrix.shape)
    return out[:, 0] if vector else out


def inverse_fourier_columns(matrix, shape=None):
    matrix = np.asarray(matrix)
    vector = matrix.ndim == 1
    if vector:
        matrix = matrix[:, None]
    if shape is None or len(shape) == 1:
        out = unitary_ifft(matrix, axis=0)
    else:
        grid = matrix.reshape(tuple(shape) + (matrix.shape[1],))
        for axis in range(len(shape)):
            grid = unitary_ifft(grid, axis=axis)
        out = grid.reshape(matrix.shape)
    return out[:, 0] if vector else out


def dft(s, shape=None):
    """
    Normalized DFT of a signal

    Input
    -----
    s : RealSignal or array-like
        real or complex samples
    shape : tuple, optional
        signal shape for multidimensional signals (row-major)

    Return
    ------
    Spectrum
        REAL_ORIGIN when the input was real
    """
    if isinstance(s, RealSignal):
        values = s.values
    else:
        values = np.asarray(s).reshape(-1)
    if values.size < 1:
        raise DimensionMismatchError('cannot transform an empty signal')
    origin = GENERAL if np.iscomplexobj(values) else REAL_ORIGIN
    return Spectrum(fourier_columns(values, shape), origin=origin, shape=shape)


def idft(S):
    """
    Inverse of dft

    Return
    ------
    array
        real array for real-origin spectra (after checking
        conjugate symmetry), complex array otherwise
    """
    if not isinstance(S, Spectrum):
        S = Spectrum(S)
    samples = inverse_fourier_columns(S.values, S.shape)
    if S.origin == REAL_ORIGIN:
        S.check_symmetry()
        return samples.real
    return samples


def circular_convolve(w, x, shape=None):
    """
    Circular convolution y = w * x

    y[l] = sum_l' w[l'] x[l - l' + 1 mod L], computed through
    dft(y) = sqrt(L) dft(w) . dft(x)
    """
    w = w if isinstance(w, RealSignal) else RealSignal(w)
    x = x if isinstance(x, RealSignal) else RealSignal(x)
    if w.L != x.L:
        raise DimensionMismatchError('cannot convolve lengths {} and {}'.format(w.L, x.L))
    spectrum = np.sqrt(w.L) * fourier_columns(w.values, shape) * fourier_columns(x.values, shape)
    return RealSignal(inverse_fourier_columns(spectrum, shape).real)


def real_inner(u, v):
    """
    Re<u, v> with the convention <u, v> = v* u
    """
    return float(np.real(np.vdot(v, u)))
