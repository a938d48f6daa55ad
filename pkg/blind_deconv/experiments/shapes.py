"""
Synthetic test image of simple shapes
"""
import numpy as np


def shapes_image(L1=64, L2=64):
    """
    Piecewise-constant image with a rectangle, a disk and a triangle
    on a dark background, values in [0, 1]
    """
    rows, cols = np.mgrid[0:L1, 0:L2]
    y = rows / L1
    x = cols / L2
    img = np.full((L1, L2), 0.1)
    img[(y >= 0.125) & (y < 0.4375) & (x >= 0.125) & (x < 0.5)] = 0.8
    img[(y - 0.6875) ** 2 + (x - 0.6875) ** 2 < 0.2 ** 2] = 0.5
    triangle = (y >= 0.625) & (y < 0.9375) & (x >= 0.0625) & (x - 0.0625 < (y - 0.625) * 1.2)
    img[triangle] = 1.0
    img[(y >= 0.0625) & (y < 0.25) & (x >= 0.625) & (x < 0.9375)] = 0.3
    return img
