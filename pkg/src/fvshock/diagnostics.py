"""Solution-quality metrics along a shock-crossing sampling line.

The error is exact-minus-numerical density.  Norms and total variation are
evaluated over fixed windows of cells immediately upstream (pre-shock) and
downstream (post-shock) of the exact shock crossing; the monotonicity
parameter is the excess of total variation over the peak error for the
combined windows and is ~0 for monotone error profiles, large for
oscillatory ones.  Samples are assumed ordered by increasing x with the flow
running left to right, so "pre" means smaller x.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class LineProfile:
    """Density samples along a line, with the exact shock crossing located.

    ``shock_index`` is the first sample whose x-center lies at or after the
    exact crossing.
    """

    xs: np.ndarray
    rho_num: np.ndarray
    rho_exact: np.ndarray
    shock_index: int

    def __post_init__(self):
        n = len(self.xs)
        if not (len(self.rho_num) == n and len(self.rho_exact) == n):
            raise ValueError("profile arrays must have equal length")
        if np.any(np.diff(self.xs) <= 0):
            raise ValueError("sample coordinates must be strictly increasing")
        if not (0 <= self.shock_index < n):
            raise ValueError(f"shock_index {self.shock_index} outside [0, {n})")


@dataclass(frozen=True)
class RegionMetrics:
    l2: float
    linf: float
    tv: float
    cell_count: int


@dataclass(frozen=True)
class ShockLineReport:
    pre: RegionMetrics
    post: RegionMetrics

    @property
    def overall_linf(self) -> float:
        return self.pre.linf + self.post.linf

    @property
    def overall_tv(self) -> float:
        return self.pre.tv + self.post.tv

    @property
    def mu(self) -> float:
        return self.overall_tv - self.overall_linf


def error_profile(profile: LineProfile) -> np.ndarray:
    """Pointwise error, exact minus numerical (overshoots in rho come out negative)."""
    return np.asarray(profile.rho_exact, float) - np.asarray(profile.rho_num, float)


def l2_norm(e) -> float:
    e = np.asarray(e, dtype=float)
    if e.size == 0:
        raise ValueError("l2_norm of empty sequence")
    return float(np.sqrt(np.mean(np.abs(e) ** 2)))


def linf_norm(e) -> float:
    e = np.asarray(e, dtype=float)
    if e.size == 0:
        raise ValueError("linf_norm of empty sequence")
    return float(np.max(np.abs(e)))


def total_variation(e) -> float:
    e = np.asarray(e, dtype=float)
    if e.size < 2:
        raise ValueError("total variation needs at least 2 samples")
    return float(np.sum(np.abs(np.diff(e))))


def shock_windows(profile: LineProfile, width: int = 20) -> tuple[np.ndarray, np.ndarray]:
    """Index windows of ``width`` cells on each side of the shock cell.

    The shock-straddling cell itself belongs to neither window.
    """
    s = profile.shock_index
    n = len(profile.xs)
    n_pre, n_post = s, n - s - 1
    if n_pre < width or n_post < width:
        raise ValueError(
            f"need {width} cells on each side of the shock, have {n_pre} pre / {n_post} post"
        )
    return np.arange(s - width, s), np.arange(s + 1, s + width + 1)


def region_metrics(e) -> RegionMetrics:
    e = np.asarray(e, dtype=float)
    return RegionMetrics(l2=l2_norm(e), linf=linf_norm(e), tv=total_variation(e), cell_count=e.size)


def combine_regions(pre: RegionMetrics, post: RegionMetrics) -> ShockLineReport:
    """Pre- and post-shock metrics combined by the overall-sum rule.

    Overall TV and overall peak error are each the sum of the two regional
    values (the overall peak is therefore not a norm), and the monotonicity
    parameter is their difference.
    """
    return ShockLineReport(pre=pre, post=post)


def monotonicity_report(profile: LineProfile, width: int = 20) -> ShockLineReport:
    """Per-region error metrics and the monotonicity parameter."""
    e = error_profile(profile)
    pre_idx, post_idx = shock_windows(profile, width)
    return combine_regions(region_metrics(e[pre_idx]), region_metrics(e[post_idx]))


def l2_linf_window_report(profile: LineProfile, width: int = 20) -> tuple[float, float]:
    """L2 and peak error over the concatenated pre+post windows."""
    e = error_profile(profile)
    pre_idx, post_idx = shock_windows(profile, width)
    both = np.concatenate([e[pre_idx], e[post_idx]])
    return l2_norm(both), linf_norm(both)


def build_line_profile(density, mesh, y: float, exact, shock) -> LineProfile:
    """Sample a density field along the row nearest y and locate the shock.

    ``exact`` is the case's primitive-field evaluator and ``shock`` its line
    geometry (needs ``x_at_y``).  The exact density is evaluated at the row's
    cell centers; the shock index is the first center at or after the exact
    crossing of the row's center line.
    """
    xs, rho_num = mesh.sample_row(np.asarray(density), y)
    y_row = mesh.y_centers()[mesh.row_index(y)]
    rho_exact = exact(xs, np.full_like(xs, y_row))[..., 0]
    x_cross = float(shock.x_at_y(y_row))
    if not (xs[0] <= x_cross <= xs[-1]):
        raise ValueError(f"shock crosses the sampling row at x = {x_cross}, outside the domain")
    shock_index = int(np.searchsorted(xs, x_cross))
    return LineProfile(xs=xs, rho_num=np.asarray(rho_num, float), rho_exact=rho_exact,
                       shock_index=shock_index)
