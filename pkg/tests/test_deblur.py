import numpy as np
import pytest

from blind_deconv._helpers import DimensionMismatchError
from blind_deconv.experiments.deblur import (ESTIMATED, ORACLE, Image2D, box_kernel_support,
                                             run_deblur)
from blind_deconv.experiments.haar import gen_haar_subset_basis, top_coefficients
from blind_deconv.experiments.shapes import shapes_image
from blind_deconv.operator import build_operator
from blind_deconv.signal import circular_convolve, fourier_columns
from blind_deconv.subspace import identity_columns


def test_shapes_image():
    img = shapes_image(32, 32)
    assert img.shape == (32, 32)
    assert img.min() >= 0.0 and img.max() <= 1.0
    assert len(np.unique(img)) == 5


def test_image_validation():
    with pytest.raises(ValueError):
        Image2D(np.full((4, 4), 1.5))
    with pytest.raises(DimensionMismatchError):
        Image2D(np.zeros(16))
    assert Image2D(np.zeros((4, 8))).L == 32


def test_box_kernel_support_wraps():
    np.testing.assert_array_equal(box_kernel_support((8, 8), 3),
                                  [0, 1, 7, 8, 9, 15, 56, 57, 63])
    np.testing.assert_array_equal(box_kernel_support((8, 8), 1), [0])


def test_deblur_operator_matches_two_dimensional_convolution():
    shape = (16, 16)
    img = shapes_image(*shape)
    support = box_kernel_support(shape)
    B = identity_columns(256, support)
    C = gen_haar_subset_basis(shape, top_coefficients(img, 40))
    op = build_operator(B, C, shape)
    rng = np.random.default_rng(0)
    h, m = rng.standard_normal(9), rng.standard_normal(40)
    expected = fourier_columns(circular_convolve(B.embed(h), C.columns @ m, shape).values, shape)
    np.testing.assert_allclose(op.apply_factored(h, m), expected, atol=1e-9)


def test_single_pixel_kernel_is_recovered_exactly():
    img = shapes_image(8, 8)
    result = run_deblur(img, kernel_support=[0], N=64, observe='model', seed=1)
    assert result.err_kernel < 1e-6
    assert result.err_image < 1e-4
    np.testing.assert_allclose(result.blurred, img, atol=1e-12)
    assert result.kernel.shape == (8, 8)
    assert result.kernel.sum() == pytest.approx(1.0)


def test_kernel_support_as_pixel_pairs():
    img = shapes_image(8, 8)
    result = run_deblur(img, kernel_support=[[0, 0]], N=64, observe='model', seed=1)
    assert result.err_kernel < 1e-6


@pytest.mark.parametrize('kwargs', [{'kernel_support': [[8, 0]]}, {'N': 65},
                                    {'kernel': np.ones(2)}])
def test_deblur_input_errors(kwargs):
    with pytest.raises(DimensionMismatchError):
        run_deblur(shapes_image(8, 8), **kwargs)


@pytest.mark.parametrize('kwargs', [{'wavelet_support': 'curvelet'}, {'observe': 'both'}])
def test_deblur_mode_errors(kwargs):
    with pytest.raises(ValueError):
        run_deblur(shapes_image(8, 8), N=8, **kwargs)


@pytest.mark.slow
def test_oracle_support_deblurring():
    img = shapes_image(64, 64)
    oracle = run_deblur(img, box_kernel_support(img.shape, 3), wavelet_support=ORACLE,
                        energy_fraction=0.999, seed=0)
    assert oracle.support_energy >= 0.999
    assert oracle.err_image < 0.05
    estimated = run_deblur(img, box_kernel_support(img.shape, 3), wavelet_support=ESTIMATED,
                           N=oracle.N, seed=0)
    assert estimated.err_image > oracle.err_image
