"""
Helper functions and exceptions shared by the deconvolution modules
"""
import numpy as np


class DeconvError(Exception):
    pass


class DimensionMismatchError(DeconvError, ValueError):
    pass


class SymmetryViolationError(DeconvError):
    pass


class NonUnitVectorError(DeconvError, ValueError):
    pass


class CapExceededError(DeconvError):
    pass


class RetriesExhaustedError(DeconvError):
    pass


class UndefinedErrorSignal(DeconvError):
    pass


class ConfigError(DeconvError):
    """
    Configuration problem, optionally tied to a line
    of the configuration file
    """
    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = 'line {}: {}'.format(lineno, message)
        super().__init__(message)


def trial_rng(seed, *key):
    """
    Random generator for one cell/trial of an experiment

    The stream is a Philox counter-based generator keyed by
    the run seed and an arbitrary tuple of integers, so any
    single trial can be reproduced without running the others.

    Input
    -----
    seed : int
        run seed
    key : int
        further integers identifying the stream

    Return
    ------
    numpy.random.Generator
    """
    entropy = [int(seed)] + [int(k) for k in key]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def as_rng(seed_or_rng):
    """
    Accept a seed or an existing generator
    """
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng
    return trial_rng(seed_or_rng)


def check_shape(array, shape, name):
    """
    Raise DimensionMismatchError if array does not have the given shape
    """
    if np.shape(array) != tuple(shape):
        raise DimensionMismatchError('{} has shape {}, expected {}'.format(
            name, np.shape(array), tuple(shape)))


def relative_error(estimate, truth):
    """
    Frobenius relative error ||estimate - truth|| / ||truth||
    """
    denom = np.linalg.norm(truth)
    if denom == 0:
        raise UndefinedErrorSignal('relative error against a zero reference')
    return float(np.linalg.norm(np.asarray(estimate) - np.asarray(truth)) / denom)
