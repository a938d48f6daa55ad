import numpy as np
import pytest

from blind_deconv._helpers import DimensionMismatchError
from blind_deconv.experiments.haar import (coefficients_for_energy, gen_haar_subset_basis,
                                           haar2d, haar_basis_columns, ihaar2d, max_levels,
                                           top_coefficients)
from blind_deconv.subspace import HAAR_SUBSET


def test_two_by_two_transform():
    a, b, c, d = 0.9, 0.2, 0.4, 0.7
    grid = haar2d(np.array([[a, b], [c, d]]))
    assert grid[0, 0] == pytest.approx((a + b + c + d) / 2)
    details = sorted(abs(v) for v in (grid[0, 1], grid[1, 0], grid[1, 1]))
    expected = sorted(abs(v) for v in ((a - b + c - d) / 2, (a + b - c - d) / 2,
                                       (a - b - c + d) / 2))
    np.testing.assert_allclose(details, expected, atol=1e-12)


def test_constant_image_has_one_coefficient():
    grid = haar2d(np.full((8, 8), 0.5))
    assert grid[0, 0] == pytest.approx(0.5 * 8)
    rest = grid.copy()
    rest[0, 0] = 0.0
    assert np.max(np.abs(rest)) < 1e-12


def test_transform_preserves_norm_and_inverts():
    img = np.random.default_rng(0).random((16, 32))
    grid = haar2d(img)
    assert grid.shape == img.shape
    assert np.linalg.norm(grid) == pytest.approx(np.linalg.norm(img), abs=1e-10)
    np.testing.assert_allclose(ihaar2d(grid), img, atol=1e-12)


def test_partial_depth_inverts():
    img = np.random.default_rng(1).random((8, 8))
    np.testing.assert_allclose(ihaar2d(haar2d(img, levels=1), levels=1), img, atol=1e-12)


def test_materialized_transform_is_orthogonal():
    columns = haar_basis_columns((16, 16), np.arange(256))
    np.testing.assert_allclose(columns.T @ columns, np.eye(256), atol=1e-10)


def test_max_levels():
    assert max_levels((64, 64)) == 6
    assert max_levels((12, 8)) == 2
    assert max_levels((3, 4)) == 0


@pytest.mark.parametrize('shape, levels', [((3, 4), None), ((8, 8), 4), ((8,), None)])
def test_dimension_errors(shape, levels):
    with pytest.raises(DimensionMismatchError):
        haar2d(np.zeros(shape), levels)


def test_subset_basis():
    basis = gen_haar_subset_basis((8, 8), [0, 5, 17])
    assert basis.kind == HAAR_SUBSET
    assert basis.columns.shape == (64, 3)
    assert basis.orthonormality_defect() < 1e-10
    coefficients = haar2d(basis.columns[:, 1].reshape(8, 8)).reshape(-1)
    assert coefficients[5] == pytest.approx(1.0)
    with pytest.raises(DimensionMismatchError):
        gen_haar_subset_basis((8, 8), [1, 1])
    with pytest.raises(DimensionMismatchError):
        gen_haar_subset_basis((8, 8), [64])


def test_top_coefficients_pick_largest():
    grid = np.zeros((4, 4))
    grid.reshape(-1)[[3, 9, 14]] = [5.0, -7.0, 1.0]
    img = ihaar2d(grid)
    np.testing.assert_array_equal(top_coefficients(img, 2), [3, 9])


def test_energy_count():
    grid = np.zeros((4, 4))
    grid.reshape(-1)[[0, 6]] = [3.0, 1.0]
    img = ihaar2d(grid)
    assert coefficients_for_energy(img, 0.85) == 1
    assert coefficients_for_energy(img, 0.999) == 2
    assert coefficients_for_energy(np.zeros((4, 4)), 0.999) == 1
