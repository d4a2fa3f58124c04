"""Compiled inner loops for the solver hot path.

Each kernel mirrors a vectorized numpy implementation in euler.py or
reconstruction.py, with identical operation order (numba defaults keep IEEE
semantics, no fastmath), so both paths agree to the last bit on the same
input.  If numba is unavailable the callers fall back to the numpy versions.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(func):
            return func

        return wrap if not (args and callable(args[0])) else args[0]


@njit(cache=True)
def rusanov_axis_kernel(wL, wR, axis, gamma):  # pragma: no cover - compiled
    n0, n1 = wL.shape[0], wL.shape[1]
    flux = np.empty((n0, n1, 4))
    lam = np.empty((n0, n1))
    gm1 = gamma - 1.0
    for i in range(n0):
        for j in range(n1):
            rl, ul, vl, pl = wL[i, j, 0], wL[i, j, 1], wL[i, j, 2], wL[i, j, 3]
            rr, ur, vr, pr = wR[i, j, 0], wR[i, j, 1], wR[i, j, 2], wR[i, j, 3]
            unl = ul if axis == 0 else vl
            unr = ur if axis == 0 else vr
            el = pl / gm1 + 0.5 * rl * (ul * ul + vl * vl)
            er = pr / gm1 + 0.5 * rr * (ur * ur + vr * vr)
            s = max(abs(unl) + np.sqrt(gamma * pl / rl), abs(unr) + np.sqrt(gamma * pr / rr))
            lam[i, j] = s
            f1l = rl * ul * unl
            f1r = rr * ur * unr
            f2l = rl * vl * unl
            f2r = rr * vr * unr
            if axis == 0:
                f1l += pl
                f1r += pr
            else:
                f2l += pl
                f2r += pr
            flux[i, j, 0] = 0.5 * (rl * unl + rr * unr) - 0.5 * s * (rr - rl)
            flux[i, j, 1] = 0.5 * (f1l + f1r) - 0.5 * s * (rr * ur - rl * ul)
            flux[i, j, 2] = 0.5 * (f2l + f2r) - 0.5 * s * (rr * vr - rl * vl)
            flux[i, j, 3] = 0.5 * ((el + pl) * unl + (er + pr) * unr) - 0.5 * s * (er - el)
    return flux, lam


@njit(cache=True)
def muscl_faces_kernel(w, limited, g, n, kappa, eps):  # pragma: no cover - compiled
    """Left/right face values for the n + 1 faces along the first axis."""
    n1 = w.shape[1]
    left = np.empty((n + 1, n1, 4))
    right = np.empty((n + 1, n1, 4))
    for f in range(n + 1):
        il = g - 1 + f
        ir = g + f
        for j in range(n1):
            lim_l = limited[il, j]
            lim_r = limited[ir, j]
            for c in range(4):
                u0 = w[il, j, c]
                dm = u0 - w[il - 1, j, c]
                dp = w[il + 1, j, c] - u0
                if lim_l:
                    if abs(dm) < eps:
                        left[f, j, c] = u0
                    else:
                        r = dp / dm
                        phi = max(0.0, min(min(2.0 * r, (1.0 + 2.0 * r) / 3.0), 2.0))
                        left[f, j, c] = u0 + 0.5 * phi * dm
                else:
                    left[f, j, c] = u0 + 0.25 * ((1.0 - kappa) * dm + (1.0 + kappa) * dp)

                u0 = w[ir, j, c]
                dm = u0 - w[ir + 1, j, c]
                dp = w[ir - 1, j, c] - u0
                if lim_r:
                    if abs(dm) < eps:
                        right[f, j, c] = u0
                    else:
                        r = dp / dm
                        phi = max(0.0, min(min(2.0 * r, (1.0 + 2.0 * r) / 3.0), 2.0))
                        right[f, j, c] = u0 + 0.5 * phi * dm
                else:
                    right[f, j, c] = u0 + 0.25 * ((1.0 - kappa) * dm + (1.0 + kappa) * dp)
    return left, right
