"""Centered-difference discretization of det(D^2 u) on uniform grids.

At an interior node the second differences depend on the center value ``v``
and on frozen neighbor sums

    a = u[i+1,j,k] + u[i-1,j,k]
    b = u[i,j+1,k] + u[i,j-1,k]
    c = u[i,j,k+1] + u[i,j,k-1]

and the mixed differences (scaled by h^2)

    r = (u[i+1,j+1,k] + u[i-1,j-1,k] - u[i-1,j+1,k] - u[i+1,j-1,k]) / 4
    s = (u[i+1,j,k+1] + u[i-1,j,k-1] - u[i-1,j,k+1] - u[i+1,j,k-1]) / 4
    t = (u[i,j+1,k+1] + u[i,j-1,k-1] - u[i,j+1,k-1] - u[i,j-1,k+1]) / 4

so the discrete Hessian is ``[[a-2v, r, s], [r, b-2v, t], [s, t, c-2v]] / h^2``
(top-left 2x2 block with ``r`` only in 2D).  Setting its determinant equal to
the source value turns each nodal equation into a polynomial in ``v``:

    3D:  P(v) = -8 v^3 + 4 (a+b+c) v^2 + 2 (r^2+s^2+t^2 - ab - ac - bc) v
                + (abc - a t^2 - b s^2 - c r^2 + 2 r s t - h^6 f)
    2D:  P(v) = 4 v^2 - 2 (a+b) v + (ab - r^2 - h^4 f)

with the sign convention ``det(H(v)) - f = +P(v) / h^(2*dim)`` (leading
coefficient -8 resp. +4).  ``h^6``/``h^4`` are formed as plain products of
``h`` so the polynomial/operator identity is bit-stable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numba as nb
import numpy as np

from .grid import GridField

_NB = {"nogil": True, "cache": True}


@dataclass(frozen=True)
class LocalCoefficients2D:
    a: float
    b: float
    r: float


@dataclass(frozen=True)
class LocalCoefficients3D:
    a: float
    b: float
    c: float
    r: float
    s: float
    t: float


def local_coefficients(field: GridField, index: Sequence[int]):
    """Neighbor sums and mixed differences at one interior node."""
    g = field.geometry
    if len(index) != g.dim:
        raise ValueError(f"index has {len(index)} components for dim={g.dim}")
    if any(not 0 < c < g.n for c in index):
        raise ValueError(f"index {tuple(index)} is not interior (1..{g.n - 1})")
    u = field.values
    if g.dim == 2:
        i, j = index
        a = u[i + 1, j] + u[i - 1, j]
        b = u[i, j + 1] + u[i, j - 1]
        r = 0.25 * (u[i + 1, j + 1] + u[i - 1, j - 1] - u[i - 1, j + 1] - u[i + 1, j - 1])
        return LocalCoefficients2D(a, b, r)
    i, j, k = index
    a = u[i + 1, j, k] + u[i - 1, j, k]
    b = u[i, j + 1, k] + u[i, j - 1, k]
    c = u[i, j, k + 1] + u[i, j, k - 1]
    r = 0.25 * (u[i + 1, j + 1, k] + u[i - 1, j - 1, k] - u[i - 1, j + 1, k] - u[i + 1, j - 1, k])
    s = 0.25 * (u[i + 1, j, k + 1] + u[i - 1, j, k - 1] - u[i - 1, j, k + 1] - u[i + 1, j, k - 1])
    t = 0.25 * (u[i, j + 1, k + 1] + u[i, j - 1, k - 1] - u[i, j + 1, k - 1] - u[i, j - 1, k + 1])
    return LocalCoefficients3D(a, b, c, r, s, t)


def discrete_hessian(field: GridField, index: Sequence[int], center_value: float) -> np.ndarray:
    """Symmetric discrete Hessian at an interior node with center ``v``."""
    g = field.geometry
    co = local_coefficients(field, index)
    h2 = g.h * g.h
    v = center_value
    if g.dim == 2:
        return np.array([
            [(co.a - 2.0 * v) / h2, co.r / h2],
            [co.r / h2, (co.b - 2.0 * v) / h2],
        ])
    return np.array([
        [(co.a - 2.0 * v) / h2, co.r / h2, co.s / h2],
        [co.r / h2, (co.b - 2.0 * v) / h2, co.t / h2],
        [co.s / h2, co.t / h2, (co.c - 2.0 * v) / h2],
    ])


def cubic_from_neighbors(co: LocalCoefficients3D, f_value: float, h: float) -> tuple[float, float, float, float]:
    """Coefficients (c3, c2, c1, c0) of the 3D nodal polynomial in ``v``."""
    a, b, c, r, s, t = co.a, co.b, co.c, co.r, co.s, co.t
    h6 = h * h * h * h * h * h
    c3 = -8.0
    c2 = 4.0 * (a + b + c)
    c1 = 2.0 * (r * r + s * s + t * t - a * b - a * c - b * c)
    c0 = a * b * c - a * t * t - b * s * s - c * r * r + 2.0 * r * s * t - h6 * f_value
    return c3, c2, c1, c0


def quadratic_from_neighbors(co: LocalCoefficients2D, f_value: float, h: float) -> tuple[float, float, float]:
    """Coefficients (q2, q1, q0) of the 2D nodal polynomial in ``v``."""
    a, b, r = co.a, co.b, co.r
    h4 = h * h * h * h
    return 4.0, -2.0 * (a + b), a * b - r * r - h4 * f_value


@nb.njit(**_NB)
def _operator_3d(u, h, out):
    """out[interior] = det of the discrete Hessian of u; boundary untouched."""
    n = u.shape[0] - 1
    h2 = h * h
    h6 = h2 * h2 * h2
    for i in range(1, n):
        for j in range(1, n):
            for k in range(1, n):
                v = u[i, j, k]
                axx = u[i + 1, j, k] + u[i - 1, j, k] - 2.0 * v
                byy = u[i, j + 1, k] + u[i, j - 1, k] - 2.0 * v
                czz = u[i, j, k + 1] + u[i, j, k - 1] - 2.0 * v
                r = 0.25 * (u[i + 1, j + 1, k] + u[i - 1, j - 1, k]
                            - u[i - 1, j + 1, k] - u[i + 1, j - 1, k])
                s = 0.25 * (u[i + 1, j, k + 1] + u[i - 1, j, k - 1]
                            - u[i - 1, j, k + 1] - u[i + 1, j, k - 1])
                t = 0.25 * (u[i, j + 1, k + 1] + u[i, j - 1, k - 1]
                            - u[i, j + 1, k - 1] - u[i, j - 1, k + 1])
                det = (axx * byy * czz + 2.0 * r * s * t
                       - axx * t * t - byy * s * s - czz * r * r)
                out[i, j, k] = det / h6


@nb.njit(**_NB)
def _operator_2d(u, h, out):
    n = u.shape[0] - 1
    h2 = h * h
    h4 = h2 * h2
    for i in range(1, n):
        for j in range(1, n):
            v = u[i, j]
            axx = u[i + 1, j] + u[i - 1, j] - 2.0 * v
            byy = u[i, j + 1] + u[i, j - 1] - 2.0 * v
            r = 0.25 * (u[i + 1, j + 1] + u[i - 1, j - 1]
                        - u[i - 1, j + 1] - u[i + 1, j - 1])
            out[i, j] = (axx * byy - r * r) / h4


@nb.njit(**_NB)
def _residual_3d(u, rhs, h, out):
    """out[interior] = rhs - det(discrete Hessian); boundary untouched."""
    n = u.shape[0] - 1
    h2 = h * h
    h6 = h2 * h2 * h2
    for i in range(1, n):
        for j in range(1, n):
            for k in range(1, n):
                v = u[i, j, k]
                axx = u[i + 1, j, k] + u[i - 1, j, k] - 2.0 * v
                byy = u[i, j + 1, k] + u[i, j - 1, k] - 2.0 * v
                czz = u[i, j, k + 1] + u[i, j, k - 1] - 2.0 * v
                r = 0.25 * (u[i + 1, j + 1, k] + u[i - 1, j - 1, k]
                            - u[i - 1, j + 1, k] - u[i + 1, j - 1, k])
                s = 0.25 * (u[i + 1, j, k + 1] + u[i - 1, j, k - 1]
                            - u[i - 1, j, k + 1] - u[i + 1, j, k - 1])
                t = 0.25 * (u[i, j + 1, k + 1] + u[i, j - 1, k - 1]
                            - u[i, j + 1, k - 1] - u[i, j - 1, k + 1])
                det = (axx * byy * czz + 2.0 * r * s * t
                       - axx * t * t - byy * s * s - czz * r * r)
                out[i, j, k] = rhs[i, j, k] - det / h6


@nb.njit(**_NB)
def _residual_2d(u, rhs, h, out):
    n = u.shape[0] - 1
    h2 = h * h
    h4 = h2 * h2
    for i in range(1, n):
        for j in range(1, n):
            v = u[i, j]
            axx = u[i + 1, j] + u[i - 1, j] - 2.0 * v
            byy = u[i, j + 1] + u[i, j - 1] - 2.0 * v
            r = 0.25 * (u[i + 1, j + 1] + u[i - 1, j - 1]
                        - u[i - 1, j + 1] - u[i + 1, j - 1])
            out[i, j] = rhs[i, j] - (axx * byy - r * r) / h4


def apply_operator(field: GridField) -> GridField:
    """Discrete det(D^2 u) at interior nodes; zero on the boundary."""
    out = GridField.zeros(field.geometry)
    if field.geometry.dim == 2:
        _operator_2d(field.values, field.geometry.h, out.values)
    else:
        _operator_3d(field.values, field.geometry.h, out.values)
    return out


def residual(field: GridField, rhs: GridField) -> GridField:
    """``rhs - det(D^2 u)`` at interior nodes; zero on the boundary."""
    if rhs.geometry != field.geometry:
        raise ValueError("rhs geometry does not match field geometry")
    out = GridField.zeros(field.geometry)
    if field.geometry.dim == 2:
        _residual_2d(field.values, rhs.values, field.geometry.h, out.values)
    else:
        _residual_3d(field.values, rhs.values, field.geometry.h, out.values)
    return out
