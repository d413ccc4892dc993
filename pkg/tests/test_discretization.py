"""Centered 19-point (3D) / 9-point (2D) discretization of det(D^2 u).

The structural check ties the nodal update polynomial to an independent
evaluation path: assembling the discrete Hessian as a matrix and taking
``numpy.linalg.det``.  For every center value v,

    det(H(v)) - f  ==  P(v) / h**(2*dim)

with P the polynomial returned by the ``*_from_neighbors`` assemblers.
"""

import numpy as np
import pytest

from mamg import GridField, GridGeometry, apply_operator, residual
from mamg.discretization import (
    cubic_from_neighbors,
    discrete_hessian,
    local_coefficients,
    quadratic_from_neighbors,
)
from mamg.problems import catalog, default_geometry, sample_source


def _random_field(dim, n, seed):
    geom = GridGeometry(dim, n, (0.0,) * dim, 1.0)
    rng = np.random.default_rng(seed)
    return GridField(geom, rng.standard_normal(geom.shape)), rng


def test_local_coefficients_2d_frozen_case():
    geom = GridGeometry(2, 2, (0.0, 0.0), 1.0)
    field = GridField(geom, np.array([
        [3.0, 1.0, 4.0],
        [1.0, 5.0, 9.0],
        [2.0, 6.0, 5.0],
    ]))
    co = local_coefficients(field, (1, 1))
    assert (co.a, co.b, co.r) == (7.0, 10.0, 0.5)


def test_local_coefficients_3d_frozen_case():
    geom = GridGeometry(3, 2, (0.0, 0.0, 0.0), 1.0)
    field = GridField(geom, np.array([
        [[-8, 5, 3], [-1, -1, 7], [-8, 4, -6]],
        [[-8, 1, 9], [4, 5, 4], [5, 0, -7]],
        [[6, -1, 0], [-2, -6, 8], [5, 3, -2]],
    ], dtype=float))
    co = local_coefficients(field, (1, 1, 1))
    assert (co.a, co.b, co.c) == (-7.0, 1.0, 8.0)
    assert (co.r, co.s, co.t) == (1.25, 0.5, -7.25)


def test_local_coefficients_rejects_boundary_index():
    field = GridField.zeros(GridGeometry(2, 4, (0.0, 0.0), 1.0))
    for bad in [(0, 2), (4, 2), (2, 0), (2, 4)]:
        with pytest.raises(ValueError):
            local_coefficients(field, bad)


def test_cubic_assembly_matches_written_formula():
    field, rng = _random_field(3, 4, seed=3)
    co = local_coefficients(field, (2, 1, 3))
    f_value, h = 1.7, field.geometry.h
    a, b, c, r, s, t = co.a, co.b, co.c, co.r, co.s, co.t
    expected = (
        -8.0,
        4.0 * (a + b + c),
        2.0 * (r * r + s * s + t * t - a * b - a * c - b * c),
        a * b * c - a * t * t - b * s * s - c * r * r + 2.0 * r * s * t
        - h**6 * f_value,
    )
    assert cubic_from_neighbors(co, f_value, h) == pytest.approx(expected, rel=1e-15)


def test_quadratic_assembly_matches_written_formula():
    field, _ = _random_field(2, 4, seed=4)
    co = local_coefficients(field, (3, 2))
    f_value, h = 0.9, field.geometry.h
    expected = (4.0, -2.0 * (co.a + co.b), co.a * co.b - co.r**2 - h**4 * f_value)
    assert quadratic_from_neighbors(co, f_value, h) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("dim", [2, 3])
def test_polynomial_equals_scaled_hessian_determinant(dim):
    # det(H(v)) - f == +P(v) / h**(2 dim) for arbitrary center values v
    field, rng = _random_field(dim, 8, seed=10 + dim)
    h = field.geometry.h
    for _ in range(40):
        idx = tuple(rng.integers(1, 8, size=dim))
        co = local_coefficients(field, idx)
        f_value = float(rng.uniform(0.1, 5.0))
        for v in rng.uniform(-2.0, 2.0, size=4):
            det = np.linalg.det(discrete_hessian(field, idx, v))
            if dim == 2:
                c2, c1, c0 = quadratic_from_neighbors(co, f_value, h)
                p = (c2 * v + c1) * v + c0
            else:
                c3, c2, c1, c0 = cubic_from_neighbors(co, f_value, h)
                p = ((c3 * v + c2) * v + c1) * v + c0
            lhs = det - f_value
            rhs = p / h ** (2 * dim)
            assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs))


@pytest.mark.parametrize("name", ["quad2d", "quad3d"])
def test_operator_is_exact_on_quadratics(name):
    problem = catalog(name)
    geom = default_geometry(problem, 8)
    u = GridField.from_function(geom, problem.exact)
    det = apply_operator(u)
    assert np.max(np.abs(det.interior() - 1.0)) < 1e-10


@pytest.mark.parametrize("name", ["quad2d", "quad3d"])
def test_residual_vanishes_on_exact_quadratic(name):
    problem = catalog(name)
    geom = default_geometry(problem, 8)
    u = GridField.from_function(geom, problem.exact)
    r = residual(u, sample_source(problem, geom))
    assert np.max(np.abs(r.values)) < 1e-10
    # residual carries a zero boundary by construction
    assert np.all(r.values[0] == 0.0) and np.all(r.values[-1] == 0.0)


@pytest.mark.parametrize("dim", [2, 3])
def test_residual_agrees_with_operator_difference(dim):
    field, rng = _random_field(dim, 8, seed=20 + dim)
    geom = field.geometry
    rhs = GridField(geom, rng.uniform(0.5, 2.0, size=geom.shape))
    r = residual(field, rhs)
    direct = rhs.values - apply_operator(field).values
    sl = (slice(1, -1),) * dim
    np.testing.assert_allclose(r.values[sl], direct[sl], rtol=1e-13, atol=1e-13)


def test_pointwise_hessian_matches_operator_kernel():
    problem = catalog("ex4")
    geom = default_geometry(problem, 8)
    u = GridField.from_function(geom, problem.exact)
    det = apply_operator(u)
    for idx in [(1, 1, 1), (4, 4, 4), (2, 7, 3)]:
        v = u.values[idx]
        expected = np.linalg.det(discrete_hessian(u, idx, v))
        assert det.values[idx] == pytest.approx(expected, rel=1e-12)


def test_truncation_error_is_second_order():
    # Max-norm truncation ratios on this problem approach 4 from below as the
    # grid refines (measured 3.55, 3.71, 3.84 for 8->16->32->64), so assert a
    # second-order convergence rate per pair plus monotone approach to 4.
    problem = catalog("ex4")
    norms = {}
    for n in (8, 16, 32):
        geom = default_geometry(problem, n)
        u = GridField.from_function(geom, problem.exact)
        r = residual(u, sample_source(problem, geom))
        norms[n] = np.max(np.abs(r.interior()))
    ratios = [norms[8] / norms[16], norms[16] / norms[32]]
    for ratio in ratios:
        assert 1.75 <= np.log2(ratio) <= 2.25
    assert ratios[0] < ratios[1] <= 4.0


def test_discrete_hessian_positive_definite_on_convex_sample():
    problem = catalog("ex4")
    geom = default_geometry(problem, 8)
    u = GridField.from_function(geom, problem.exact)
    for idx in [(1, 1, 1), (4, 4, 4), (7, 2, 5)]:
        eigs = np.linalg.eigvalsh(discrete_hessian(u, idx, u.values[idx]))
        assert eigs.min() > 0.0
