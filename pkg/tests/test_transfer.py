"""Intergrid transfers: half-weighting, injection, trilinear, cubic.

Stencil weights are pinned by delta probes: restricting (or prolonging) a
single unit impulse must reproduce the advertised stencil entries exactly,
since each output node is a finite weighted sum of inputs.
"""

import itertools

import numpy as np
import pytest

from mamg import GridField, GridGeometry, catalog, default_geometry
from mamg.transfer import (
    LevelPair,
    level_pair,
    prolong_cubic,
    prolong_trilinear,
    restrict_halfweight,
    restrict_inject,
)


def _pair(dim, fine_n, origin=None, extent=1.0):
    origin = origin if origin is not None else (0.0,) * dim
    return level_pair(GridGeometry(dim, fine_n, origin, extent))


def _delta(geometry, index):
    field = GridField.zeros(geometry)
    field.values[index] = 1.0
    return field


def test_level_pair_validates_halving():
    fine = GridGeometry(2, 8, (0.0, 0.0), 1.0)
    other = GridGeometry(2, 2, (0.0, 0.0), 1.0)
    with pytest.raises(ValueError):
        LevelPair(fine, other)
    with pytest.raises(ValueError):
        LevelPair(fine, GridGeometry(2, 4, (0.5, 0.0), 1.0))
    pair = level_pair(fine)
    assert pair.coarse.n == 4
    assert pair.coarse.h == 2 * pair.fine.h


def test_geometry_mismatch_is_rejected():
    pair = _pair(2, 8)
    wrong = GridField.zeros(pair.coarse)
    with pytest.raises(ValueError):
        restrict_halfweight(wrong, pair)
    with pytest.raises(ValueError):
        prolong_trilinear(GridField.zeros(pair.fine), pair)


def test_injection_copies_coincident_nodes():
    pair = _pair(3, 8)
    fn = lambda x, y, z: np.sin(x) + y * z + x**4
    fine = GridField.from_function(pair.fine, fn)
    coarse = restrict_inject(fine, pair)
    expected = GridField.from_function(pair.coarse, fn)
    assert np.array_equal(coarse.values, expected.values)


def test_halfweight_preserves_interior_constants():
    for dim in (2, 3):
        pair = _pair(dim, 16)
        fine = GridField.zeros(pair.fine)
        fine.interior()[:] = 3.5
        coarse = restrict_halfweight(fine, pair)
        deep = coarse.values[(slice(2, -2),) * dim]
        np.testing.assert_allclose(deep, 3.5, rtol=1e-15)
        for axis in range(dim):
            assert np.all(np.take(coarse.values, 0, axis) == 0.0)
            assert np.all(np.take(coarse.values, -1, axis) == 0.0)


def test_halfweight_is_exact_on_linear_fields():
    pair = _pair(3, 16)
    fn = lambda x, y, z: 2.0 * x - 3.0 * y + 0.5 * z + 1.0
    fine = GridField.from_function(pair.fine, fn)
    coarse = restrict_halfweight(fine, pair)
    expected = GridField.from_function(pair.coarse, fn)
    sl = (slice(1, -1),) * 3
    np.testing.assert_allclose(coarse.values[sl], expected.values[sl], rtol=1e-14)


def test_halfweight_delta_probes_3d():
    pair = _pair(3, 8)
    # impulse at an even fine node: only the coincident coarse node sees it,
    # with the center weight 6/12
    coarse = restrict_halfweight(_delta(pair.fine, (4, 4, 4)), pair)
    expected = np.zeros(pair.coarse.shape)
    expected[2, 2, 2] = 0.5
    assert np.array_equal(coarse.values, expected)
    # impulse at an odd fine node along one axis: face weight 1/12 seen by
    # the two adjacent coarse nodes
    coarse = restrict_halfweight(_delta(pair.fine, (5, 4, 4)), pair)
    expected = np.zeros(pair.coarse.shape)
    expected[2, 2, 2] = expected[3, 2, 2] = 1.0 / 12.0
    assert np.array_equal(coarse.values, expected)
    # impulse odd along two axes: invisible to the half-weighting stencil
    coarse = restrict_halfweight(_delta(pair.fine, (5, 5, 4)), pair)
    assert np.all(coarse.values == 0.0)


def test_halfweight_delta_probes_2d():
    pair = _pair(2, 8)
    coarse = restrict_halfweight(_delta(pair.fine, (4, 4)), pair)
    expected = np.zeros(pair.coarse.shape)
    expected[2, 2] = 0.5
    assert np.array_equal(coarse.values, expected)
    coarse = restrict_halfweight(_delta(pair.fine, (4, 3)), pair)
    expected = np.zeros(pair.coarse.shape)
    expected[2, 1] = expected[2, 2] = 1.0 / 8.0
    assert np.array_equal(coarse.values, expected)


def test_trilinear_reproduces_constants_and_linears():
    for dim in (2, 3):
        pair = _pair(dim, 8)
        coeffs = (2.0, -3.0, 0.5)[:dim]
        fn = lambda *cs: sum(a * c for a, c in zip(coeffs, cs)) + 1.25
        coarse = GridField.from_function(pair.coarse, fn)
        fine = prolong_trilinear(coarse, pair)
        expected = GridField.from_function(pair.fine, fn)
        np.testing.assert_allclose(fine.values, expected.values, rtol=1e-14)


def test_trilinear_delta_footprint_3d():
    pair = _pair(3, 8)
    fine = prolong_trilinear(_delta(pair.coarse, (2, 2, 2)), pair)
    for offset in itertools.product((-1, 0, 1), repeat=3):
        idx = tuple(4 + o for o in offset)
        odd_axes = sum(o != 0 for o in offset)
        assert fine.values[idx] == 0.5**odd_axes
    # no value may leak beyond one fine node from the source
    far = fine.values.copy()
    far[3:6, 3:6, 3:6] = 0.0
    assert np.all(far == 0.0)


def test_trilinear_matches_distribution_stencil_entrywise():
    # probe every interior coarse node of a 4 -> 8 pair and check the full
    # prolongation matrix column against the tensor weights {1, 1/2, 1/4, 1/8}
    pair = _pair(3, 8)
    nc = pair.coarse.n
    for ci in itertools.product(range(1, nc), repeat=3):
        fine = prolong_trilinear(_delta(pair.coarse, ci), pair)
        expected = np.zeros(pair.fine.shape)
        for offset in itertools.product((-1, 0, 1), repeat=3):
            idx = tuple(2 * c + o for c, o in zip(ci, offset))
            expected[idx] = 0.5 ** sum(o != 0 for o in offset)
        assert np.array_equal(fine.values, expected)


def test_trilinear_injection_round_trip_on_linears():
    pair = _pair(3, 8)
    fn = lambda x, y, z: x - 2.0 * y + 3.0 * z
    fine = GridField.from_function(pair.fine, fn)
    back = prolong_trilinear(restrict_inject(fine, pair), pair)
    np.testing.assert_allclose(back.values, fine.values, atol=1e-14)


def test_cubic_reproduces_tensor_cubics_exactly():
    for dim in (2, 3):
        pair = _pair(dim, 16)

        def fn(*cs):
            out = 1.0
            for c in cs:
                out = out * (c**3 - 1.5 * c**2 + 0.25 * c + 2.0)
            return out

        coarse = GridField.from_function(pair.coarse, fn)
        fine = prolong_cubic(coarse, pair)
        expected = GridField.from_function(pair.fine, fn)
        np.testing.assert_allclose(fine.values, expected.values, rtol=1e-12)


def test_cubic_falls_back_to_trilinear_on_tiny_grids():
    pair = _pair(3, 4)  # coarse n=2: no 4-point stencil fits
    rng = np.random.default_rng(8)
    coarse = GridField(pair.coarse, rng.standard_normal(pair.coarse.shape))
    np.testing.assert_array_equal(
        prolong_cubic(coarse, pair).values, prolong_trilinear(coarse, pair).values
    )


def test_cubic_beats_trilinear_on_smooth_data():
    problem = catalog("ex4")
    pair = level_pair(default_geometry(problem, 16))
    coarse = GridField.from_function(pair.coarse, problem.exact)
    exact = GridField.from_function(pair.fine, problem.exact)
    dev_tri = np.max(np.abs(prolong_trilinear(coarse, pair).values - exact.values))
    dev_cub = np.max(np.abs(prolong_cubic(coarse, pair).values - exact.values))
    assert dev_cub <= dev_tri / 4.0


@pytest.mark.parametrize(
    "op, side",
    [
        (restrict_halfweight, "fine"),
        (restrict_inject, "fine"),
        (prolong_trilinear, "coarse"),
        (prolong_cubic, "coarse"),
    ],
)
def test_operators_are_linear(op, side):
    pair = _pair(3, 8)
    geom = pair.fine if side == "fine" else pair.coarse
    rng = np.random.default_rng(11)
    u = GridField(geom, rng.standard_normal(geom.shape))
    v = GridField(geom, rng.standard_normal(geom.shape))
    alpha, beta = 1.7, -0.3
    combined = op(GridField(geom, alpha * u.values + beta * v.values), pair)
    separate = alpha * op(u, pair).values + beta * op(v, pair).values
    np.testing.assert_allclose(combined.values, separate, atol=1e-13)
