"""MUSCL face reconstruction, switchable per cell between limited and unlimited.

Primitive variables (rho, u, v, p) are reconstructed.  A cell flagged in the
troubled mask contributes limited face values (Koren limiter); an unflagged
cell contributes the unlimited kappa = 1/3 linear reconstruction of the same
MUSCL family, so switching the limiter off in a cell does not change the
underlying scheme order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .euler import PrimitiveState
from .mesh import StructuredMesh

KAPPA = 1.0 / 3.0

# upwind differences below this magnitude are treated as flat (limited mode
# falls back to first order locally rather than dividing by ~0)
SLOPE_EPS = 1e-12


def koren_phi(r):
    """Koren limiter: phi(r) = max(0, min(2r, (1 + 2r)/3, 2))."""
    r = np.asarray(r, dtype=float)
    phi = np.maximum(0.0, np.minimum(np.minimum(2.0 * r, (1.0 + 2.0 * r) / 3.0), 2.0))
    return phi if phi.ndim else float(phi)


@dataclass(frozen=True)
class FacePair:
    """Reconstructed states on the two sides of one face."""

    left: PrimitiveState
    right: PrimitiveState


@dataclass
class FaceStates:
    """Primitive face states for all interior faces of a field.

    x-faces: arrays of shape (nx + 1, ny, 4); face f sits between cells
    (g - 1 + f, j) and (g + f, j).  y-faces: shape (nx, ny + 1, 4).
    ``fallback_faces`` counts faces where an inadmissible reconstructed state
    forced a local drop to the cell averages.
    """

    left_x: np.ndarray
    right_x: np.ndarray
    left_y: np.ndarray
    right_y: np.ndarray
    fallback_faces: int = 0


def _owner_face_value(u_up, u_own, u_down, limited):
    """Face value contributed by a cell toward the face on its ``down`` side.

    ``u_up``/``u_down`` are the neighbor values away from / toward the face.
    Limited mode: u + phi(dp/dm) dm / 2 with dm = u - u_up, dp = u_down - u.
    Unlimited mode: the kappa-scheme value u + [(1-kappa) dm + (1+kappa) dp]/4.
    """
    dm = u_own - u_up
    dp = u_down - u_own
    linear = u_own + 0.25 * ((1.0 - KAPPA) * dm + (1.0 + KAPPA) * dp)
    flat = np.abs(dm) < SLOPE_EPS
    r = dp / np.where(flat, 1.0, dm)
    lim = u_own + np.where(flat, 0.0, 0.5 * koren_phi(r) * dm)
    return np.where(limited, lim, linear)


def muscl_face_states(stencil, limited_left: bool, limited_right: bool) -> FacePair:
    """Reconstruct both states of the face between stencil[1] and stencil[2].

    ``stencil`` holds 4 consecutive cell-average PrimitiveStates ordered along
    increasing coordinate; the flags select limited or unlimited mode for the
    owning cells (stencil[1] owns the left state, stencil[2] the right).
    """
    u = np.stack([s.as_array() if isinstance(s, PrimitiveState) else np.asarray(s, float) for s in stencil])
    left = _owner_face_value(u[0], u[1], u[2], limited_left)
    right = _owner_face_value(u[3], u[2], u[1], limited_right)
    return FacePair(PrimitiveState.from_array(left), PrimitiveState.from_array(right))


def _faces_along_axis(w: np.ndarray, limited: np.ndarray, g: int, n: int, axis: int):
    """Left/right face states for the n + 1 faces of a direction with n cells.

    Face f sits between allocated cells g - 1 + f and g + f along ``axis``;
    its left state is owned by the former, the right by the latter.  All
    stencils fit inside the allocated grid for ghost_width >= 2.
    """

    def sl(arr, lo, hi):
        idx = [slice(None)] * arr.ndim
        idx[axis] = slice(lo, hi)
        return arr[tuple(idx)]

    left = _owner_face_value(
        sl(w, g - 2, g + n - 1), sl(w, g - 1, g + n), sl(w, g, g + n + 1),
        sl(limited, g - 1, g + n)[..., None],
    )
    right = _owner_face_value(
        sl(w, g + 1, g + n + 2), sl(w, g, g + n + 1), sl(w, g - 1, g + n),
        sl(limited, g, g + n + 1)[..., None],
    )
    return left, right


def reconstruct_all_faces(w: np.ndarray, limited: np.ndarray, mesh: StructuredMesh) -> FaceStates:
    """MUSCL face states for every interior face, honoring the per-cell flags.

    ``w``: primitive field over the allocated grid, ghosts filled.
    ``limited``: boolean per allocated cell (interior mask edge-padded into
    the ghost layers); True selects the Koren-limited reconstruction for that
    cell's face contributions.

    Faces where either reconstructed state has rho <= 0 or p <= 0 fall back
    to the adjacent cell averages (locally first order); the count of such
    faces is recorded.
    """
    g, nx, ny = mesh.ghost_width, mesh.nx, mesh.ny
    jint = slice(g, g + ny)
    iint = slice(g, g + nx)

    if _kernels.HAVE_NUMBA:
        lx, rx = _kernels.muscl_faces_kernel(
            np.ascontiguousarray(w[:, jint]), np.ascontiguousarray(limited[:, jint]),
            g, nx, KAPPA, SLOPE_EPS,
        )
        ly_t, ry_t = _kernels.muscl_faces_kernel(
            np.ascontiguousarray(w[iint, :].transpose(1, 0, 2)),
            np.ascontiguousarray(limited[iint, :].T),
            g, ny, KAPPA, SLOPE_EPS,
        )
        ly = np.ascontiguousarray(ly_t.transpose(1, 0, 2))
        ry = np.ascontiguousarray(ry_t.transpose(1, 0, 2))
    else:
        lx, rx = _faces_along_axis(w[:, jint], limited[:, jint], g, nx, axis=0)
        ly, ry = _faces_along_axis(w[iint, :], limited[iint, :], g, ny, axis=1)

    fallback = 0
    fallback += _apply_admissibility_fallback(lx, rx, w[g - 1 : g + nx, jint], w[g : g + nx + 1, jint])
    fallback += _apply_admissibility_fallback(ly, ry, w[iint, g - 1 : g + ny], w[iint, g : g + ny + 1])
    return FaceStates(left_x=lx, right_x=rx, left_y=ly, right_y=ry, fallback_faces=fallback)


def _apply_admissibility_fallback(left, right, owner_left, owner_right) -> int:
    bad = (
        (left[..., 0] <= 0.0)
        | (left[..., 3] <= 0.0)
        | (right[..., 0] <= 0.0)
        | (right[..., 3] <= 0.0)
    )
    n_bad = int(np.count_nonzero(bad))
    if n_bad:
        left[bad] = owner_left[bad]
        right[bad] = owner_right[bad]
    return n_bad


def first_order_faces(w: np.ndarray, mesh: StructuredMesh) -> FaceStates:
    """Face states from plain cell averages (first-order scheme); views into w."""
    g, nx, ny = mesh.ghost_width, mesh.nx, mesh.ny
    jint = slice(g, g + ny)
    iint = slice(g, g + nx)
    return FaceStates(
        left_x=w[g - 1 : g + nx, jint],
        right_x=w[g : g + nx + 1, jint],
        left_y=w[iint, g - 1 : g + ny],
        right_y=w[iint, g : g + ny + 1],
    )


def extend_mask_to_ghosts(flags: np.ndarray, mesh: StructuredMesh) -> np.ndarray:
    """Edge-pad an interior (nx, ny) mask onto the allocated grid.

    Ghost cells inherit the flag of the nearest interior cell, so boundary
    faces see a consistent limiting mode on both sides.
    """
    g = mesh.ghost_width
    return np.pad(flags, g, mode="edge")
