"""
Planted blind-deconvolution instances and observation noise
"""
from dataclasses import dataclass

import numpy as np

from ..operator import build_operator
from ..signal import fourier_columns
from ..subspace import make_basis, random_unit_vector


@dataclass(frozen=True)
class PlantedInstance:
    """
    Ground truth w = B h, x = C m and the clean observation
    spectrum A(h m^T) = dft(w * x)
    """
    op: object
    h: np.ndarray
    m: np.ndarray
    y_hat: np.ndarray

    @property
    def w(self):
        return self.op.B.embed(self.h)

    @property
    def x(self):
        return self.op.C.columns @ self.m


def make_planted(L, K, N, B_kind, C_kind, rng):
    """
    Random bases of the given kinds and unit Gaussian h, m
    """
    B = make_basis(B_kind, L, K, rng)
    C = make_basis(C_kind, L, N, rng)
    op = build_operator(B, C)
    h = random_unit_vector(K, rng)
    m = random_unit_vector(N, rng)
    return PlantedInstance(op=op, h=h, m=m, y_hat=op.apply_factored(h, m))


def noise_sigma(w, x, snr_db, L):
    """
    Noise level for SNR = 10 log10(||w x^T||_F^2 / E||z||^2), z ~ N(0, sigma^2 I_L)
    """
    if np.isinf(snr_db):
        return 0.0
    signal = np.linalg.norm(w) * np.linalg.norm(x)
    return float(signal / np.sqrt(L * 10 ** (snr_db / 10)))


def noise_bound(sigma, L):
    """
    delta = sqrt(L + sqrt(4L)) sigma, an upper bound for ||z|| with
    high probability
    """
    return float(np.sqrt(L + np.sqrt(4 * L)) * sigma)


def noisy_observation(instance, snr_db, rng, shape=None):
    """
    Clean spectrum plus the spectrum of real white noise

    Return
    ------
    y_hat : array
    sigma : float
    noise_norm : float
    """
    L = instance.op.L
    sigma = noise_sigma(instance.w, instance.x, snr_db, L)
    if sigma == 0:
        return instance.y_hat, 0.0, 0.0
    z = sigma * rng.standard_normal(L)
    return instance.y_hat + fourier_columns(z, shape), sigma, float(np.linalg.norm(z))
