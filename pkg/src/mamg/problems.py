"""Catalog of Dirichlet problems for det(D^2 u) = f on box domains.

Each problem carries a strictly positive source ``f``, Dirichlet boundary
data ``g``, and (for every catalog entry) the exact convex solution used to
report discretization errors.  All callables are vectorized: they accept
``dim`` coordinate arrays and evaluate elementwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import ConfigurationError, DataError
from .grid import GridField, GridGeometry


@dataclass(frozen=True)
class Problem:
    """A Dirichlet problem instance on the box ``origin + [0, extent]^dim``."""

    name: str
    dim: int
    origin: tuple[float, ...]
    extent: float
    source: Callable
    boundary: Callable
    exact: Optional[Callable] = None


def _sq(x, y, z=None):
    rho = x * x + y * y
    return rho if z is None else rho + z * z


_CATALOG: dict[str, Problem] = {}


def _register(problem: Problem) -> Problem:
    _CATALOG[problem.name] = problem
    return problem


_register(Problem(
    name="quad2d", dim=2, origin=(0.0, 0.0), extent=1.0,
    source=lambda x, y: np.ones_like(x),
    boundary=lambda x, y: 0.5 * _sq(x, y),
    exact=lambda x, y: 0.5 * _sq(x, y),
))

_register(Problem(
    name="quad3d", dim=3, origin=(0.0, 0.0, 0.0), extent=1.0,
    source=lambda x, y, z: np.ones_like(x),
    boundary=lambda x, y, z: 0.5 * _sq(x, y, z),
    exact=lambda x, y, z: 0.5 * _sq(x, y, z),
))

_register(Problem(
    name="ex1", dim=2, origin=(0.0, 0.0), extent=1.0,
    source=lambda x, y: (1.0 + _sq(x, y)) * np.exp(_sq(x, y)),
    boundary=lambda x, y: np.exp(0.5 * _sq(x, y)),
    exact=lambda x, y: np.exp(0.5 * _sq(x, y)),
))

# Source blows up at the origin corner; only interior nodes are sampled.
_register(Problem(
    name="ex2", dim=2, origin=(0.0, 0.0), extent=1.0,
    source=lambda x, y: 1.0 / np.sqrt(_sq(x, y)),
    boundary=lambda x, y: (2.0 * np.sqrt(2.0) / 3.0) * _sq(x, y) ** 0.75,
    exact=lambda x, y: (2.0 * np.sqrt(2.0) / 3.0) * _sq(x, y) ** 0.75,
))

# Gradient blows up toward the corner (1,1); f is smooth in the interior.
_register(Problem(
    name="ex3", dim=2, origin=(0.0, 0.0), extent=1.0,
    source=lambda x, y: 2.0 / (2.0 - _sq(x, y)) ** 2,
    boundary=lambda x, y: -np.sqrt(2.0 - _sq(x, y)),
    exact=lambda x, y: -np.sqrt(2.0 - _sq(x, y)),
))

_register(Problem(
    name="ex4", dim=3, origin=(0.0, 0.0, 0.0), extent=1.0,
    source=lambda x, y, z: (1.0 + _sq(x, y, z)) * np.exp(1.5 * _sq(x, y, z)),
    boundary=lambda x, y, z: np.exp(0.5 * _sq(x, y, z)),
    exact=lambda x, y, z: np.exp(0.5 * _sq(x, y, z)),
))

_register(Problem(
    name="ex5", dim=3, origin=(0.0, 0.0, 0.0), extent=float(np.pi),
    source=lambda x, y, z: (np.sin(x) + 1.0) * (np.sin(y) + 1.0) * (np.sin(z) + 1.0),
    boundary=lambda x, y, z: -np.sin(x) - np.sin(y) - np.sin(z) + 0.5 * _sq(x, y, z),
    exact=lambda x, y, z: -np.sin(x) - np.sin(y) - np.sin(z) + 0.5 * _sq(x, y, z),
))

_register(Problem(
    name="ex6", dim=3, origin=(0.0, 0.0, 0.0), extent=1.0,
    source=lambda x, y, z: 0.0625 * _sq(x, y, z) ** -0.75,
    boundary=lambda x, y, z: _sq(x, y, z) ** 0.75 / 3.0,
    exact=lambda x, y, z: _sq(x, y, z) ** 0.75 / 3.0,
))

_register(Problem(
    name="ex7", dim=3, origin=(0.0, 0.0, 0.0), extent=1.0,
    source=lambda x, y, z: 3.0 * (3.0 - _sq(x, y, z)) ** -2.5,
    boundary=lambda x, y, z: -np.sqrt(3.0 - _sq(x, y, z)),
    exact=lambda x, y, z: -np.sqrt(3.0 - _sq(x, y, z)),
))


def catalog(name: str) -> Problem:
    """Look up a problem by id; unknown ids raise ``ConfigurationError``."""
    try:
        return _CATALOG[name]
    except KeyError:
        known = ", ".join(sorted(_CATALOG))
        raise ConfigurationError(f"unknown problem {name!r} (known: {known})") from None


def problem_names() -> list[str]:
    return sorted(_CATALOG)


def default_geometry(problem: Problem, n: int) -> GridGeometry:
    """Grid over the problem's own box with ``n`` cells per axis."""
    return GridGeometry(problem.dim, n, problem.origin, problem.extent)


def sample_source(problem: Problem, geometry: GridGeometry) -> GridField:
    """Source term sampled at interior nodes; boundary entries are zero.

    Raises ``DataError`` if any interior sample is non-finite (e.g. a grid
    whose interior touches a singularity of ``f``).
    """
    if geometry.dim != problem.dim:
        raise ValueError(
            f"geometry dim {geometry.dim} does not match problem dim {problem.dim}"
        )
    field = GridField.from_function(geometry, problem.source)
    interior = field.interior()
    if not np.all(np.isfinite(interior)):
        raise DataError(f"non-finite source values for {problem.name!r} interior")
    out = GridField.zeros(geometry)
    out.interior()[...] = interior
    return out


def apply_boundary(problem: Problem, field: GridField) -> GridField:
    """Overwrite every boundary node with ``g`` at its coordinate (in place).

    Interior nodes are untouched; applying twice is a no-op.  Returns the
    same field for chaining.
    """
    if field.geometry.dim != problem.dim:
        raise ValueError(
            f"field dim {field.geometry.dim} does not match problem dim {problem.dim}"
        )
    g = GridField.from_function(field.geometry, problem.boundary)
    _copy_boundary(g.values, field.values)
    return field


def _copy_boundary(src: np.ndarray, dst: np.ndarray) -> None:
    """Copy the boundary faces of ``src`` into ``dst`` (same shape)."""
    dim = dst.ndim
    for axis in range(dim):
        for side in (0, -1):
            sl = [slice(None)] * dim
            sl[axis] = side
            dst[tuple(sl)] = src[tuple(sl)]
