"""Uniform Cartesian cell-centered mesh with ghost layers.

Index convention: ``i`` runs along x (columns), ``j`` along y (rows), so a
field over the allocated grid has shape ``(nx + 2g, ny + 2g, ...)`` with
``g = ghost_width``.  Interior cells occupy ``[g, g + nx) x [g, g + ny)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np


class CellIndex(NamedTuple):
    i: int
    j: int


@dataclass(frozen=True)
class StructuredMesh:
    nx: int
    ny: int
    x0: float
    y0: float
    x1: float
    y1: float
    ghost_width: int = 2

    def __post_init__(self):
        if self.nx < 4 or self.ny < 4:
            raise ValueError(f"mesh needs nx, ny >= 4, got {self.nx}x{self.ny}")
        if not (self.x1 > self.x0 and self.y1 > self.y0):
            raise ValueError("domain bounds must satisfy x1 > x0 and y1 > y0")
        if self.ghost_width < 2:
            raise ValueError("ghost_width must be >= 2 (second-order stencil)")

    @property
    def dx(self) -> float:
        return (self.x1 - self.x0) / self.nx

    @property
    def dy(self) -> float:
        return (self.y1 - self.y0) / self.ny

    @property
    def volume(self) -> float:
        """Cell volume (area in 2D), uniform over the mesh."""
        return self.dx * self.dy

    @property
    def shape(self) -> tuple[int, int]:
        """Allocated shape including ghost layers."""
        g = self.ghost_width
        return (self.nx + 2 * g, self.ny + 2 * g)

    @property
    def interior(self) -> tuple[slice, slice]:
        g = self.ghost_width
        return (slice(g, g + self.nx), slice(g, g + self.ny))

    def x_centers(self, include_ghosts: bool = False) -> np.ndarray:
        g = self.ghost_width if include_ghosts else 0
        i = np.arange(-g, self.nx + g)
        return self.x0 + (i + 0.5) * self.dx

    def y_centers(self, include_ghosts: bool = False) -> np.ndarray:
        g = self.ghost_width if include_ghosts else 0
        j = np.arange(-g, self.ny + g)
        return self.y0 + (j + 0.5) * self.dy

    def center_grids(self, include_ghosts: bool = False):
        """Meshgrid of cell-center coordinates, indexed [i, j]."""
        return np.meshgrid(
            self.x_centers(include_ghosts),
            self.y_centers(include_ghosts),
            indexing="ij",
        )

    def neighbors(self, idx: CellIndex) -> tuple[CellIndex, CellIndex, CellIndex, CellIndex]:
        """Face-adjacent neighbors in fixed (west, east, south, north) order.

        ``idx`` is an allocated-grid index; interior cells always have all
        four neighbors allocated because ghost_width >= 1.
        """
        i, j = idx
        ni, nj = self.shape
        if not (0 <= i < ni and 0 <= j < nj):
            raise IndexError(f"cell {idx} outside allocated grid {ni}x{nj}")
        return (
            CellIndex(i - 1, j),
            CellIndex(i + 1, j),
            CellIndex(i, j - 1),
            CellIndex(i, j + 1),
        )

    def row_index(self, y: float) -> int:
        """Interior row index whose centers are nearest y.

        If y falls exactly on a horizontal face, the row above (larger j)
        is taken.
        """
        if not (self.y0 <= y <= self.y1):
            raise ValueError(f"y = {y} outside domain [{self.y0}, {self.y1}]")
        j = int(np.floor((y - self.y0) / self.dy))
        return min(j, self.ny - 1)

    def sample_row(self, values: np.ndarray, y: float):
        """Sample an interior-shaped (nx, ny) array along the row nearest y.

        Returns (x_centers, row_values) ordered by increasing x.
        """
        values = np.asarray(values)
        if values.shape[:2] != (self.nx, self.ny):
            raise ValueError(
                f"expected interior-shaped array ({self.nx}, {self.ny}, ...), got {values.shape}"
            )
        j = self.row_index(y)
        return self.x_centers(), values[:, j]


def build_mesh(nx: int, ny: int, bounds=(0.0, 0.0, 1.0, 1.0), ghost_width: int = 2) -> StructuredMesh:
    x0, y0, x1, y1 = bounds
    return StructuredMesh(nx=nx, ny=ny, x0=x0, y0=y0, x1=x1, y1=y1, ghost_width=ghost_width)
