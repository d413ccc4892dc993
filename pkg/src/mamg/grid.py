"""Uniform node-centered grids on square/cubic boxes: geometry, fields, norms.

Fields are stored as dense ``float64`` arrays of shape ``(n+1,)*dim`` with
axes ordered ``(x, y)`` in 2D and ``(x, y, z)`` in 3D.  The arrays are
C-contiguous, so the layout is lexicographic with the *last* axis fastest
(y in 2D, z in 3D); sweeps iterate in the same order, keeping the inner
loop contiguous in memory.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np


@dataclass(frozen=True)
class GridGeometry:
    """Geometry of a uniform node-centered grid over a box domain.

    Parameters
    ----------
    dim : int
        Spatial dimension, 2 or 3.
    n : int
        Cells per axis; must be a power of two with ``n >= 2``.  There are
        ``n + 1`` nodes per axis (indices ``0..n``), and nodes with an index
        equal to 0 or ``n`` on any axis are boundary nodes.
    origin : tuple of float
        Coordinates of node ``(0, ..., 0)``.
    extent : float
        Side length ``L`` of the box; the mesh step is ``h = L / n``.
    """

    dim: int
    n: int
    origin: tuple[float, ...]
    extent: float

    def __post_init__(self) -> None:
        if self.dim not in (2, 3):
            raise ValueError(f"dim must be 2 or 3, got {self.dim}")
        if self.n < 2 or self.n & (self.n - 1):
            raise ValueError(f"n must be a power of two with n >= 2, got {self.n}")
        if len(self.origin) != self.dim:
            raise ValueError(
                f"origin has {len(self.origin)} components for dim={self.dim}"
            )
        if not self.extent > 0.0:
            raise ValueError(f"extent must be positive, got {self.extent}")
        object.__setattr__(self, "origin", tuple(float(c) for c in self.origin))

    @property
    def h(self) -> float:
        """Mesh step ``extent / n``."""
        return self.extent / self.n

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n + 1,) * self.dim

    @property
    def node_count(self) -> int:
        return (self.n + 1) ** self.dim

    def axis_coordinates(self) -> tuple[np.ndarray, ...]:
        """Per-axis node coordinates ``origin[d] + h * arange(n+1)``."""
        idx = np.arange(self.n + 1, dtype=np.float64)
        return tuple(o + self.h * idx for o in self.origin)

    def node_grids(self) -> list[np.ndarray]:
        """Full coordinate arrays (meshgrid with ``indexing='ij'``)."""
        return np.meshgrid(*self.axis_coordinates(), indexing="ij")

    def coarsened(self) -> "GridGeometry":
        """Geometry with every second node (n halved); requires ``n >= 4``."""
        if self.n < 4:
            raise ValueError(f"cannot coarsen below n=2 (n={self.n})")
        return GridGeometry(self.dim, self.n // 2, self.origin, self.extent)


def node_coordinate(geometry: GridGeometry, index: Sequence[int]) -> tuple[float, ...]:
    """Coordinates of the node with the given multi-index.

    Raises ``ValueError`` if the index has the wrong length or any component
    lies outside ``0..n``.
    """
    if len(index) != geometry.dim:
        raise ValueError(f"index has {len(index)} components for dim={geometry.dim}")
    for c in index:
        if not 0 <= c <= geometry.n:
            raise ValueError(f"index component {c} outside 0..{geometry.n}")
    h = geometry.h
    return tuple(o + h * c for o, c in zip(geometry.origin, index))


@dataclass
class GridField:
    """Nodal scalar field on a :class:`GridGeometry`.

    ``values`` has shape ``(n+1,)*dim``, dtype float64, C-contiguous.
    """

    geometry: GridGeometry
    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.ascontiguousarray(self.values, dtype=np.float64)
        if v.shape != self.geometry.shape:
            raise ValueError(
                f"values shape {v.shape} does not match geometry {self.geometry.shape}"
            )
        self.values = v

    @classmethod
    def zeros(cls, geometry: GridGeometry) -> "GridField":
        return cls(geometry, np.zeros(geometry.shape))

    @classmethod
    def from_function(cls, geometry: GridGeometry, fn: Callable) -> "GridField":
        """Sample ``fn(x, y[, z])`` at every node (vectorized evaluation)."""
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            sampled = np.asarray(fn(*geometry.node_grids()), dtype=np.float64)
        return cls(geometry, np.broadcast_to(sampled, geometry.shape).copy())

    def copy(self) -> "GridField":
        return GridField(self.geometry, self.values.copy())

    def interior(self) -> np.ndarray:
        """View of the interior nodes (all indices in ``1..n-1``)."""
        return self.values[(slice(1, -1),) * self.geometry.dim]


def interior_l2_norm(field: GridField) -> float:
    """Unscaled Euclidean norm over interior nodes only."""
    return float(np.linalg.norm(field.interior().ravel()))


def max_norm_error(field: GridField, exact_fn: Callable) -> float:
    """Max-norm difference from ``exact_fn`` sampled at *all* nodes."""
    exact = GridField.from_function(field.geometry, exact_fn)
    return float(np.max(np.abs(field.values - exact.values)))


def dump_field(field: GridField, path) -> None:
    """Write a field as text: one header line (dim, n, L, origin), then one
    nodal value per line in array layout order, full round-trip precision."""
    g = field.geometry
    origin = ",".join(repr(c) for c in g.origin)
    header = f"dim={g.dim},n={g.n},L={g.extent!r},origin={origin}"
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for v in field.values.ravel():
            fh.write(repr(float(v)) + "\n")


def load_field(path) -> GridField:
    """Read a field written by :func:`dump_field`."""
    with open(path) as fh:
        header = fh.readline().strip()
        values = [float(line) for line in fh if line.strip()]
    # header format: dim=D,n=N,L=ext,origin=c0,c1[,c2]
    head, _, origin_part = header.partition(",origin=")
    fields = dict(item.split("=") for item in head.split(","))
    origin = tuple(float(c) for c in origin_part.split(","))
    dim = int(fields["dim"])
    if len(origin) != dim:
        raise ValueError(f"malformed field header: {header}")
    geometry = GridGeometry(dim, int(fields["n"]), origin, float(fields["L"]))
    arr = np.array(values, dtype=np.float64).reshape(geometry.shape)
    return GridField(geometry, arr)
