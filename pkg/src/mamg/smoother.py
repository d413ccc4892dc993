"""Convexity-selecting nonlinear Gauss-Seidel smoother.

Each visited interior node freezes its neighbors, assembles the nodal
polynomial in the center value, and overwrites the center with the smallest
real root -- the unique root whose discrete Hessian stays positive definite.
Sweeps run in place, either in lexicographic order or (2D only) in
red-black order.

For accuracy the kernels assemble the polynomial in the *increment*
``delta = v - v_old``: its coefficients are built from the factored Hessian
entries ``a - 2 v_old`` etc., which are of size ``O(h^2)``, so the closed-form
root keeps full relative precision even when the expanded coefficients of the
polynomial in ``v`` would cancel to ``h^6`` scale.  The two assemblies are the
same polynomial, shifted.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numba as nb
import numpy as np

from .discretization import _residual_2d, _residual_3d
from .errors import ConfigurationError, DegenerateNodeError
from .grid import GridField
from .rootfind import cubic_roots

_NB = {"nogil": True, "cache": True}

LEXICOGRAPHIC = "lexicographic"
RED_BLACK = "red-black"
ORDERINGS = (LEXICOGRAPHIC, RED_BLACK)


@dataclass(frozen=True)
class SweepStats:
    """Diagnostics of one in-place sweep."""

    max_update: float
    indefinite_updates: int


@dataclass
class SolveReport:
    """Outcome of an iterative solve (sweep iteration or multigrid cycles).

    ``residual_history`` holds the relative residual after each iteration
    (each V-cycle for multigrid modes; the full-multigrid pass counts as the
    first entry).  ``cycles`` is its length.  ``error_max`` is filled when the
    problem has an exact solution.
    """

    residual_history: list = field(default_factory=list)
    cycles: int = 0
    converged: bool = False
    error_max: float | None = None
    wall_time: float = 0.0
    indefinite_updates: int = 0

    @property
    def relative_residual(self) -> float:
        return self.residual_history[-1] if self.residual_history else np.inf


@nb.njit(**_NB)
def _update_3d(u, rhs, h6, i, j, k):
    """Replace u[i,j,k] by the smallest real root of its nodal cubic.

    Returns ``(delta, indefinite)``: the signed update and 1 if the discrete
    Hessian at the new value is not positive definite (Sylvester minors).
    """
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
    # nodal cubic in the increment: -8 d^3 + d2 d^2 + d1 d + d0
    d2 = 4.0 * (axx + byy + czz)
    d1 = -2.0 * (axx * byy + axx * czz + byy * czz - r * r - s * s - t * t)
    d0 = (axx * byy * czz + 2.0 * r * s * t
          - axx * t * t - byy * s * s - czz * r * r - h6 * rhs[i, j, k])
    count, delta, d_mid, d_hi = cubic_roots(-8.0, d2, d1, d0)
    u[i, j, k] = v + delta
    axx -= 2.0 * delta
    byy -= 2.0 * delta
    czz -= 2.0 * delta
    minor2 = axx * byy - r * r
    minor3 = (axx * byy * czz + 2.0 * r * s * t
              - axx * t * t - byy * s * s - czz * r * r)
    indefinite = 1 if (axx <= 0.0 or minor2 <= 0.0 or minor3 <= 0.0) else 0
    return delta, indefinite


@nb.njit(**_NB)
def _sweep_3d(u, rhs, h):
    """Lexicographic Gauss-Seidel sweep; returns (max |update|, indefinite)."""
    n = u.shape[0] - 1
    h2 = h * h
    h6 = h2 * h2 * h2
    max_update = 0.0
    indefinite = 0
    for i in range(1, n):
        for j in range(1, n):
            for k in range(1, n):
                delta, bad = _update_3d(u, rhs, h6, i, j, k)
                if abs(delta) > max_update:
                    max_update = abs(delta)
                indefinite += bad
    return max_update, indefinite


@nb.njit(**_NB)
def _update_2d(u, rhs, h4, i, j):
    """Smallest-root update of u[i,j]; returns (delta, indefinite, degenerate)."""
    v = u[i, j]
    axx = u[i + 1, j] + u[i - 1, j] - 2.0 * v
    byy = u[i, j + 1] + u[i, j - 1] - 2.0 * v
    r = 0.25 * (u[i + 1, j + 1] + u[i - 1, j - 1]
                - u[i - 1, j + 1] - u[i + 1, j - 1])
    # quadratic in the increment: 4 d^2 - 2 (axx+byy) d + (axx byy - r^2 - h^4 f);
    # its discriminant reduces to the cancellation-free sum below
    disc = (axx - byy) * (axx - byy) + 4.0 * r * r + 4.0 * h4 * rhs[i, j]
    if disc < 0.0:
        return 0.0, 0, 1
    delta = 0.25 * (axx + byy - np.sqrt(disc))
    u[i, j] = v + delta
    axx -= 2.0 * delta
    byy -= 2.0 * delta
    indefinite = 1 if (axx <= 0.0 or axx * byy - r * r <= 0.0) else 0
    return delta, indefinite, 0


@nb.njit(**_NB)
def _sweep_2d(u, rhs, h):
    n = u.shape[0] - 1
    h2 = h * h
    h4 = h2 * h2
    max_update = 0.0
    indefinite = 0
    degenerate = 0
    for i in range(1, n):
        for j in range(1, n):
            delta, bad, dead = _update_2d(u, rhs, h4, i, j)
            if abs(delta) > max_update:
                max_update = abs(delta)
            indefinite += bad
            degenerate += dead
    return max_update, indefinite, degenerate


@nb.njit(**_NB)
def _sweep_2d_redblack(u, rhs, h):
    """Two-color sweep: all (i+j) even nodes first, then odd, in place."""
    n = u.shape[0] - 1
    h2 = h * h
    h4 = h2 * h2
    max_update = 0.0
    indefinite = 0
    degenerate = 0
    for parity in range(2):
        for i in range(1, n):
            j0 = 1 + ((i + 1 + parity) % 2)
            for j in range(j0, n, 2):
                delta, bad, dead = _update_2d(u, rhs, h4, i, j)
                if abs(delta) > max_update:
                    max_update = abs(delta)
                indefinite += bad
                degenerate += dead
    return max_update, indefinite, degenerate


def _check_ordering(dim: int, ordering: str) -> None:
    if ordering not in ORDERINGS:
        raise ConfigurationError(f"unknown ordering {ordering!r} (use one of {ORDERINGS})")
    if ordering == RED_BLACK and dim != 2:
        raise ConfigurationError("red-black ordering is only supported in 2D")


def gauss_seidel_sweep(field: GridField, rhs: GridField,
                       ordering: str = LEXICOGRAPHIC) -> SweepStats:
    """One in-place nonlinear Gauss-Seidel sweep over all interior nodes."""
    if rhs.geometry != field.geometry:
        raise ValueError("rhs geometry does not match field geometry")
    dim = field.geometry.dim
    _check_ordering(dim, ordering)
    h = field.geometry.h
    if dim == 3:
        max_update, indefinite = _sweep_3d(field.values, rhs.values, h)
        return SweepStats(max_update, indefinite)
    if ordering == RED_BLACK:
        max_update, indefinite, degenerate = _sweep_2d_redblack(field.values, rhs.values, h)
    else:
        max_update, indefinite, degenerate = _sweep_2d(field.values, rhs.values, h)
    if degenerate:
        raise DegenerateNodeError(
            f"{degenerate} nodal quadratics without real roots (ellipticity lost)"
        )
    return SweepStats(max_update, indefinite)


def gauss_seidel_solve(field: GridField, rhs: GridField, tol: float = 1e-6,
                       max_iters: int = 5000,
                       ordering: str = LEXICOGRAPHIC) -> SolveReport:
    """Iterate sweeps until the relative residual drops below ``tol``.

    The stopping baseline is the residual of the field as passed in (the
    caller's initial guess).  The field is updated in place; the report
    counts one "cycle" per sweep.
    """
    if rhs.geometry != field.geometry:
        raise ValueError("rhs geometry does not match field geometry")
    _check_ordering(field.geometry.dim, ordering)
    h = field.geometry.h
    scratch = np.zeros_like(field.values)
    kernel = _residual_2d if field.geometry.dim == 2 else _residual_3d
    interior = (slice(1, -1),) * field.geometry.dim

    def rnorm() -> float:
        kernel(field.values, rhs.values, h, scratch)
        return float(np.linalg.norm(scratch[interior].ravel()))

    report = SolveReport()
    start = time.perf_counter()
    baseline = rnorm()
    # An initial guess that already satisfies the discrete equations to
    # round-off has nothing meaningful to divide by; stop immediately.
    floor = 1e-13 * float(np.linalg.norm(rhs.values[interior].ravel()))
    if baseline <= floor:
        report.converged = True
        report.wall_time = time.perf_counter() - start
        return report
    for _ in range(max_iters):
        stats = gauss_seidel_sweep(field, rhs, ordering)
        report.indefinite_updates += stats.indefinite_updates
        report.cycles += 1
        rel = rnorm() / baseline
        report.residual_history.append(rel)
        if rel <= tol or rel * baseline <= floor:
            report.converged = True
            break
    report.wall_time = time.perf_counter() - start
    return report
