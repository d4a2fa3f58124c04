"""Troubled-cell detection from cell-average density.

A cell is compared against its four face neighbors only:

    I = sum_k |rho_k - rho_c| / (n_neighbors * max(rho_c, max_k rho_k))

The value is dimensionless (invariant under uniform scaling of the density
field), exactly zero on locally constant data, and a cell is flagged as
troubled when I strictly exceeds the threshold constant K.  Thresholds in
[0.01, 0.1] are the useful operating range; larger K flags fewer cells.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InadmissibleStateError
from .mesh import StructuredMesh

# recorded in run metadata / artifact headers so output files identify the
# active detector variant
FORMULA_ID = "neighbor-absdiff-sum/(n*max-density)"


@dataclass(frozen=True)
class IndicatorConfig:
    k_threshold: float
    variable: str = "density"

    def __post_init__(self):
        if not self.k_threshold > 0.0:
            raise ValueError(f"threshold K must be positive, got {self.k_threshold}")
        if self.variable != "density":
            raise ValueError("only the density indicator is supported")


@dataclass
class TroubledMask:
    """Boolean flag per interior cell; True marks a cell needing limiting."""

    flags: np.ndarray
    k_threshold: float | None = None
    indicator_values: np.ndarray | None = field(default=None, repr=False)

    @property
    def count(self) -> int:
        return int(np.count_nonzero(self.flags))

    @classmethod
    def all_true(cls, mesh: StructuredMesh) -> "TroubledMask":
        return cls(flags=np.ones((mesh.nx, mesh.ny), dtype=bool))

    @classmethod
    def all_false(cls, mesh: StructuredMesh) -> "TroubledMask":
        return cls(flags=np.zeros((mesh.nx, mesh.ny), dtype=bool))


def indicator_value(center_avg: float, neighbor_avgs) -> float:
    """Indicator for one cell given 2-4 neighbor cell-average densities."""
    nbrs = np.asarray(neighbor_avgs, dtype=float)
    if not (nbrs.size >= 2 and nbrs.size <= 4):
        raise ValueError(f"expected 2-4 neighbors, got {nbrs.size}")
    if center_avg <= 0.0 or np.any(nbrs <= 0.0):
        raise InadmissibleStateError("indicator requires positive densities")
    scale = max(float(center_avg), float(nbrs.max()))
    return float(np.abs(nbrs - center_avg).sum() / (nbrs.size * scale))


def indicator_field(rho: np.ndarray, mesh: StructuredMesh) -> np.ndarray:
    """Indicator values for every interior cell.

    ``rho`` covers the allocated grid with ghost layers already filled, so
    each interior cell has its full 4-neighbor stencil.
    """
    g, nx, ny = mesh.ghost_width, mesh.nx, mesh.ny
    c = rho[g : g + nx, g : g + ny]
    w = rho[g - 1 : g + nx - 1, g : g + ny]
    e = rho[g + 1 : g + nx + 1, g : g + ny]
    s = rho[g : g + nx, g - 1 : g + ny - 1]
    n = rho[g : g + nx, g + 1 : g + ny + 1]
    if np.any(c <= 0) or np.any(w <= 0) or np.any(e <= 0) or np.any(s <= 0) or np.any(n <= 0):
        bad = np.argwhere(c <= 0)
        raise InadmissibleStateError(
            f"non-positive density in indicator stencil (first interior hits: {bad[:8].tolist()})",
            cells=bad,
        )
    num = np.abs(w - c) + np.abs(e - c) + np.abs(s - c) + np.abs(n - c)
    scale = np.maximum.reduce([c, w, e, s, n])
    return num / (4.0 * scale)


def flag_troubled_cells(rho: np.ndarray, mesh: StructuredMesh, config: IndicatorConfig) -> TroubledMask:
    """Flag interior cells whose indicator value strictly exceeds K.

    Deterministic for fixed input; ties at exactly K are left unflagged.
    """
    values = indicator_field(rho, mesh)
    return TroubledMask(
        flags=values > config.k_threshold,
        k_threshold=config.k_threshold,
        indicator_values=values,
    )
