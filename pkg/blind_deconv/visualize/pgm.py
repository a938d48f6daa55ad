"""
Binary PGM (P5, maxval 255) images and heatmaps
"""
import logging

import numpy as np
from PIL import Image

logger = logging.getLogger(__name__)


def to_bytes(values, vmin=None, vmax=None):
    """
    Scale an array linearly to 0..255; vmin and vmax default to the
    array's range
    """
    values = np.asarray(values, dtype=float)
    vmin = float(values.min()) if vmin is None else vmin
    vmax = float(values.max()) if vmax is None else vmax
    if vmax <= vmin:
        return np.zeros(values.shape, dtype=np.uint8)
    scaled = (np.clip(values, vmin, vmax) - vmin) / (vmax - vmin)
    return np.round(scaled * 255).astype(np.uint8)


def write_pgm(filename, values, vmin=0.0, vmax=1.0):
    """
    Write a 2D array as binary PGM
    """
    values = np.asarray(values)
    if values.ndim != 2:
        raise ValueError('PGM output needs a 2D array, got shape {}'.format(values.shape))
    Image.fromarray(to_bytes(values, vmin, vmax)).save(filename, format='PPM')
    logger.info('Wrote {}'.format(filename))
    return filename


def read_pgm(filename):
    """
    Read a grayscale image as floats in [0, 1]
    """
    with Image.open(filename) as img:
        return np.asarray(img.convert('L'), dtype=float) / 255.0


def write_heatmap(filename, grid, cell=1):
    """
    Success-rate grid in [0, 1] as PGM, rows along the first axis,
    each cell drawn as a cell x cell block
    """
    grid = np.asarray(grid, dtype=float)
    if cell > 1:
        grid = np.kron(grid, np.ones((cell, cell)))
    return write_pgm(filename, grid, 0.0, 1.0)
