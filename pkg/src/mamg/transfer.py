"""Intergrid transfer operators between a fine grid and its 2h coarsening.

Restriction comes in two flavors: half-weighting (center plus face
neighbors, weights 6/12 and 1/12 in 3D, 4/8 and 1/8 in 2D) used for
residuals, and straight injection at coincident nodes.  Prolongation is
bilinear/trilinear for coarse-grid corrections and tensor-product cubic
(4-point Lagrange per axis, one-sided at the ends) for full-multigrid
initial guesses.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba as nb
import numpy as np

from .grid import GridField, GridGeometry

_NB = {"nogil": True, "cache": True}


@dataclass(frozen=True)
class LevelPair:
    """A fine geometry and its factor-two coarsening."""

    fine: GridGeometry
    coarse: GridGeometry

    def __post_init__(self) -> None:
        f, c = self.fine, self.coarse
        if f.dim != c.dim or f.origin != c.origin or f.extent != c.extent:
            raise ValueError("fine and coarse grids cover different boxes")
        if f.n != 2 * c.n:
            raise ValueError(f"fine n={f.n} is not twice coarse n={c.n}")


def level_pair(fine: GridGeometry) -> LevelPair:
    return LevelPair(fine, fine.coarsened())


def _check(field: GridField, geometry: GridGeometry, role: str) -> None:
    if field.geometry != geometry:
        raise ValueError(f"{role} field geometry does not match level pair")


@nb.njit(**_NB)
def _restrict_hw_3d(fine, coarse):
    nc = coarse.shape[0] - 1
    for ic in range(1, nc):
        i = 2 * ic
        for jc in range(1, nc):
            j = 2 * jc
            for kc in range(1, nc):
                k = 2 * kc
                coarse[ic, jc, kc] = (
                    6.0 * fine[i, j, k]
                    + fine[i - 1, j, k] + fine[i + 1, j, k]
                    + fine[i, j - 1, k] + fine[i, j + 1, k]
                    + fine[i, j, k - 1] + fine[i, j, k + 1]
                ) / 12.0


@nb.njit(**_NB)
def _restrict_hw_2d(fine, coarse):
    nc = coarse.shape[0] - 1
    for ic in range(1, nc):
        i = 2 * ic
        for jc in range(1, nc):
            j = 2 * jc
            coarse[ic, jc] = (
                4.0 * fine[i, j]
                + fine[i - 1, j] + fine[i + 1, j]
                + fine[i, j - 1] + fine[i, j + 1]
            ) / 8.0


@nb.njit(**_NB)
def _prolong_linear_3d(coarse, fine):
    """Trilinear interpolation onto the doubled grid (all fine nodes set)."""
    nc = coarse.shape[0] - 1
    # coincident nodes
    for ic in range(nc + 1):
        for jc in range(nc + 1):
            for kc in range(nc + 1):
                fine[2 * ic, 2 * jc, 2 * kc] = coarse[ic, jc, kc]
    # midpoints of coarse edges along z, then y, then x, then face/cell centers
    nf = 2 * nc
    for i in range(0, nf + 1, 2):
        for j in range(0, nf + 1, 2):
            for k in range(1, nf, 2):
                fine[i, j, k] = 0.5 * (fine[i, j, k - 1] + fine[i, j, k + 1])
    for i in range(0, nf + 1, 2):
        for j in range(1, nf, 2):
            for k in range(nf + 1):
                fine[i, j, k] = 0.5 * (fine[i, j - 1, k] + fine[i, j + 1, k])
    for i in range(1, nf, 2):
        for j in range(nf + 1):
            for k in range(nf + 1):
                fine[i, j, k] = 0.5 * (fine[i - 1, j, k] + fine[i + 1, j, k])


@nb.njit(**_NB)
def _prolong_linear_2d(coarse, fine):
    nc = coarse.shape[0] - 1
    for ic in range(nc + 1):
        for jc in range(nc + 1):
            fine[2 * ic, 2 * jc] = coarse[ic, jc]
    nf = 2 * nc
    for i in range(0, nf + 1, 2):
        for j in range(1, nf, 2):
            fine[i, j] = 0.5 * (fine[i, j - 1] + fine[i, j + 1])
    for i in range(1, nf, 2):
        for j in range(nf + 1):
            fine[i, j] = 0.5 * (fine[i - 1, j] + fine[i + 1, j])


def restrict_halfweight(field: GridField, pair: LevelPair) -> GridField:
    """Half-weighted restriction; coarse boundary entries are zero."""
    _check(field, pair.fine, "fine")
    out = GridField.zeros(pair.coarse)
    if pair.fine.dim == 2:
        _restrict_hw_2d(field.values, out.values)
    else:
        _restrict_hw_3d(field.values, out.values)
    return out


def restrict_inject(field: GridField, pair: LevelPair) -> GridField:
    """Straight injection: coarse nodes copy their coincident fine nodes."""
    _check(field, pair.fine, "fine")
    sl = (slice(None, None, 2),) * pair.fine.dim
    return GridField(pair.coarse, field.values[sl].copy())


def prolong_trilinear(field: GridField, pair: LevelPair) -> GridField:
    """Trilinear (bilinear in 2D) prolongation; every fine node is written."""
    _check(field, pair.coarse, "coarse")
    out = GridField.zeros(pair.fine)
    if pair.fine.dim == 2:
        _prolong_linear_2d(field.values, out.values)
    else:
        _prolong_linear_3d(field.values, out.values)
    return out


def _cubic_axis(a: np.ndarray) -> np.ndarray:
    """4-point Lagrange midpoint interpolation along axis 0 (m+1 -> 2m+1).

    Midpoint weights (-1, 9, 9, -1)/16 on the centered stencil; the first and
    last midpoints use the one-sided stencil (5, 15, -5, 1)/16.  Exact for
    cubics; needs at least 4 coarse intervals.
    """
    m = a.shape[0] - 1
    out = np.empty((2 * m + 1,) + a.shape[1:])
    out[::2] = a
    out[3:-3:2] = (-a[:-3] + 9.0 * a[1:-2] + 9.0 * a[2:-1] - a[3:]) / 16.0
    out[1] = (5.0 * a[0] + 15.0 * a[1] - 5.0 * a[2] + a[3]) / 16.0
    out[-2] = (5.0 * a[-1] + 15.0 * a[-2] - 5.0 * a[-3] + a[-4]) / 16.0
    return out


def prolong_cubic(field: GridField, pair: LevelPair) -> GridField:
    """Tensor-product cubic interpolation onto the doubled grid.

    Falls back to bilinear/trilinear when the coarse grid has fewer than four
    intervals per axis (n=2), where no 4-point stencil fits.
    """
    _check(field, pair.coarse, "coarse")
    if pair.coarse.n < 4:
        return prolong_trilinear(field, pair)
    values = field.values
    for axis in range(pair.coarse.dim):
        values = np.moveaxis(_cubic_axis(np.moveaxis(values, axis, 0)), 0, axis)
    return GridField(pair.fine, values)
