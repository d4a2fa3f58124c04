"""Explicit time marching: steady pseudo-time runs with a fixed troubled mask
and unsteady SSP-RK2 runs with per-iteration flagging.

The semi-discrete form is dQ_i/dt = R_i with

    R_i = -(1/vol) * sum_faces  F_num(face) . n_out * area,

so a converged steady state has R = 0.  The residual norm RN is the
volume-weighted root-sum-square over all interior cells and components; it is
recorded every iteration and drives the convergence test.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field as dataclass_field

import numpy as np

from .errors import ConfigError, InadmissibleStateError, NumericalError
from .euler import (
    GasModel,
    PrimitiveState,
    axis_rusanov_flux,
    conserved_from_primitive,
    primitive_from_conserved,
)
from .indicator import IndicatorConfig, TroubledMask, flag_troubled_cells
from .mesh import StructuredMesh
from .reconstruction import extend_mask_to_ghosts, first_order_faces, reconstruct_all_faces

LIMITING_MODES = ("everywhere", "restricted", "first_order")
BC_KINDS = ("supersonic_inflow", "supersonic_outflow", "exact_dirichlet", "slip_wall")
SIDES = ("west", "east", "south", "north")


@dataclass(frozen=True)
class BoundarySpec:
    """One side's boundary treatment; inflow carries its Dirichlet state."""

    kind: str
    state: PrimitiveState | None = None

    def __post_init__(self):
        if self.kind not in BC_KINDS:
            raise ConfigError(f"unknown boundary kind {self.kind!r}; expected one of {BC_KINDS}")
        if self.kind == "supersonic_inflow" and self.state is None:
            raise ConfigError("supersonic_inflow requires a state")


class BoundaryConditions:
    """Fills ghost layers each stage.

    Vertical sides are filled first over whole columns, then horizontal sides
    over whole rows (including the just-filled ghost columns), so corner
    ghosts are deterministic and a second application is a no-op for a fixed
    interior.
    """

    def __init__(self, mesh: StructuredMesh, gas: GasModel, sides: dict[str, BoundarySpec], exact=None):
        missing = [s for s in SIDES if s not in sides]
        if missing:
            raise ConfigError(f"boundary conditions missing for sides: {missing}")
        self.mesh = mesh
        self.gas = gas
        self.sides = sides
        self._dirichlet: dict[str, np.ndarray] = {}
        for side, spec in sides.items():
            if spec.kind == "supersonic_inflow":
                self._dirichlet[side] = conserved_from_primitive(spec.state, gas).as_array()
            elif spec.kind == "exact_dirichlet":
                if exact is None:
                    raise ConfigError(f"side {side!r} wants exact_dirichlet but the case has no exact solution")
                self._dirichlet[side] = self._exact_block(side, exact)

    def _exact_block(self, side: str, exact) -> np.ndarray:
        g, nx, ny = self.mesh.ghost_width, self.mesh.nx, self.mesh.ny
        x, y = self.mesh.center_grids(include_ghosts=True)
        sl = {
            "west": (slice(0, g), slice(None)),
            "east": (slice(g + nx, None), slice(None)),
            "south": (slice(None), slice(0, g)),
            "north": (slice(None), slice(g + ny, None)),
        }[side]
        return conserved_from_primitive(exact(x[sl], y[sl]), self.gas)

    def apply(self, q: np.ndarray) -> None:
        g, nx, ny = self.mesh.ghost_width, self.mesh.nx, self.mesh.ny
        for side in ("west", "east", "south", "north"):
            spec = self.sides[side]
            if side == "west":
                target = (slice(0, g), slice(None))
                interior_edge = (slice(g, g + 1), slice(None))
            elif side == "east":
                target = (slice(g + nx, None), slice(None))
                interior_edge = (slice(g + nx - 1, g + nx), slice(None))
            elif side == "south":
                target = (slice(None), slice(0, g))
                interior_edge = (slice(None), slice(g, g + 1))
            else:
                target = (slice(None), slice(g + ny, None))
                interior_edge = (slice(None), slice(g + ny - 1, g + ny))

            if spec.kind == "supersonic_outflow":
                q[target] = q[interior_edge]
            elif spec.kind in ("supersonic_inflow", "exact_dirichlet"):
                q[target] = self._dirichlet[side]
            elif spec.kind == "slip_wall":
                self._apply_slip_wall(q, side)

    def _apply_slip_wall(self, q: np.ndarray, side: str) -> None:
        g, nx, ny = self.mesh.ghost_width, self.mesh.nx, self.mesh.ny
        mom = 1 if side in ("west", "east") else 2  # normal momentum component
        for k in range(g):
            if side == "west":
                ghost, mirror = (g - 1 - k, slice(None)), (g + k, slice(None))
            elif side == "east":
                ghost, mirror = (g + nx + k, slice(None)), (g + nx - 1 - k, slice(None))
            elif side == "south":
                ghost, mirror = (slice(None), g - 1 - k), (slice(None), g + k)
            else:
                ghost, mirror = (slice(None), g + ny + k), (slice(None), g + ny - 1 - k)
            q[ghost] = q[mirror]
            q[ghost + (mom,)] *= -1.0


@dataclass
class CellField:
    """Conserved states over the allocated grid, plus the iteration counter."""

    mesh: StructuredMesh
    gas: GasModel
    q: np.ndarray
    iteration: int = 0

    @property
    def interior(self) -> np.ndarray:
        return self.q[self.mesh.interior]

    def density(self) -> np.ndarray:
        """Interior density, shape (nx, ny)."""
        return self.interior[..., 0]

    def primitives_interior(self) -> np.ndarray:
        return primitive_from_conserved(self.interior, self.gas)

    def copy(self) -> "CellField":
        return CellField(mesh=self.mesh, gas=self.gas, q=self.q.copy(), iteration=self.iteration)


def make_boundary_conditions(case, mesh: StructuredMesh) -> BoundaryConditions:
    return BoundaryConditions(mesh, case.gas, case.bcs, exact=case.exact)


def initialize_field(case, mesh: StructuredMesh, bc: BoundaryConditions | None = None) -> CellField:
    """Cell averages from the case initializer (midpoint rule), ghosts filled."""
    x, y = mesh.center_grids(include_ghosts=True)
    q = conserved_from_primitive(case.initial(x, y), case.gas)
    fieldval = CellField(mesh=mesh, gas=case.gas, q=q)
    (bc or make_boundary_conditions(case, mesh)).apply(fieldval.q)
    return fieldval


@dataclass
class ResidualEval:
    R: np.ndarray
    lam_x: np.ndarray
    lam_y: np.ndarray
    boundary_flux: np.ndarray
    fallback_faces: int


def compute_residual(
    q: np.ndarray,
    mesh: StructuredMesh,
    gas: GasModel,
    limited: np.ndarray | None,
) -> ResidualEval:
    """Assemble R on the interior cells; ghosts must be filled.

    ``limited`` is the per-allocated-cell limiter flag array, or None for the
    first-order scheme (face states from plain cell averages).  Also returns
    the per-face signal speeds (for time-step control) and the net flux
    leaving through the domain boundary.
    """
    w = primitive_from_conserved(q, gas)
    if limited is None:
        faces = first_order_faces(w, mesh)
    else:
        faces = reconstruct_all_faces(w, limited, mesh)

    fx, lam_x = axis_rusanov_flux(faces.left_x, faces.right_x, 0, gas)
    fy, lam_y = axis_rusanov_flux(faces.left_y, faces.right_y, 1, gas)

    r = -((fx[1:] - fx[:-1]) / mesh.dx + (fy[:, 1:] - fy[:, :-1]) / mesh.dy)
    boundary_flux = (
        (fx[-1].sum(axis=0) - fx[0].sum(axis=0)) * mesh.dy
        + (fy[:, -1].sum(axis=0) - fy[:, 0].sum(axis=0)) * mesh.dx
    )
    return ResidualEval(
        R=r, lam_x=lam_x, lam_y=lam_y, boundary_flux=boundary_flux,
        fallback_faces=faces.fallback_faces,
    )


def residual_norm(r: np.ndarray, mesh: StructuredMesh) -> float:
    """RN = sqrt(sum_cells sum_components R^2 * volume)."""
    return float(np.sqrt(np.sum(np.square(r)) * mesh.volume))


def _interior_admissible(q_int: np.ndarray) -> np.ndarray:
    rho = q_int[..., 0]
    with np.errstate(divide="ignore", invalid="ignore"):
        e_int = q_int[..., 3] - 0.5 * (q_int[..., 1] ** 2 + q_int[..., 2] ** 2) / rho
    return (rho > 0.0) & (e_int > 0.0) & np.isfinite(e_int)


@dataclass
class StepStats:
    rn: float
    fallback_faces: int
    rejected: int
    boundary_flux: np.ndarray
    mask_count: int | None = None


def _checked_update(field: CellField, q0: np.ndarray, dq: np.ndarray, context: str) -> int:
    """Apply q0 + dq; on inadmissible result retry once with half the step."""
    interior = field.mesh.interior
    for attempt, scale in enumerate((1.0, 0.5)):
        field.q[interior] = q0 + scale * dq
        ok = _interior_admissible(field.q[interior])
        if ok.all():
            return attempt
    bad = np.argwhere(~ok)
    raise InadmissibleStateError(
        f"update produced inadmissible cells after step halving ({context}, "
        f"iteration {field.iteration}, first cells {bad[:8].tolist()})",
        cells=bad,
    )


def advance_steady(
    field: CellField,
    bc: BoundaryConditions,
    limited: np.ndarray | None,
    cfl: float,
) -> StepStats:
    """One forward-Euler pseudo-time step with local time steps.

    dt_i = cfl * min(dx, dy) / max(face signal speeds of cell i).
    """
    mesh, gas = field.mesh, field.gas
    bc.apply(field.q)
    res = compute_residual(field.q, mesh, gas, limited)
    rn = residual_norm(res.R, mesh)
    lam_cell = np.maximum(
        np.maximum(res.lam_x[:-1], res.lam_x[1:]),
        np.maximum(res.lam_y[:, :-1], res.lam_y[:, 1:]),
    )
    dt = cfl * min(mesh.dx, mesh.dy) / lam_cell
    q0 = field.interior.copy()
    rejected = _checked_update(field, q0, dt[..., None] * res.R, context="steady step")
    field.iteration += 1
    return StepStats(rn=rn, fallback_faces=res.fallback_faces, rejected=rejected,
                     boundary_flux=res.boundary_flux)


@dataclass
class ResidualHistory:
    rn: np.ndarray
    converged: bool
    stalled: bool

    @property
    def iterations_used(self) -> int:
        return len(self.rn)

    def first_iteration_at_or_below(self, level: float) -> int | None:
        """1-based iteration where RN first reached ``level``, or None."""
        hits = np.nonzero(self.rn <= level)[0]
        return int(hits[0]) + 1 if hits.size else None


@dataclass
class SolveStats:
    fallback_faces: int = 0
    rejected_steps: int = 0
    wall_time: float = 0.0
    mask_counts: list[int] = dataclass_field(default_factory=list)
    boundary_flux_integral: np.ndarray | None = None
    times: list[float] = dataclass_field(default_factory=list)


def solve_steady(
    field: CellField,
    bc: BoundaryConditions,
    limiting: str,
    mask: TroubledMask | None,
    cfl: float = 0.2,
    convergence_tol: float = 1e-14,
    max_iterations: int = 15000,
) -> tuple[ResidualHistory, SolveStats]:
    """March ``field`` toward steady state; the troubled mask stays fixed.

    Stops at the first iteration whose RN meets the tolerance, else at the
    iteration cap (recorded as a stall).  Mutates ``field`` in place.
    """
    limited = _limited_flags(limiting, mask, field.mesh)
    stats = SolveStats()
    t0 = time.perf_counter()
    rns: list[float] = []
    converged = False
    for _ in range(max_iterations):
        step = advance_steady(field, bc, limited, cfl)
        rns.append(step.rn)
        stats.fallback_faces += step.fallback_faces
        stats.rejected_steps += step.rejected
        if step.rn <= convergence_tol:
            converged = True
            break
    stats.wall_time = time.perf_counter() - t0
    return ResidualHistory(rn=np.array(rns), converged=converged, stalled=not converged), stats


def _limited_flags(limiting: str, mask: TroubledMask | None, mesh: StructuredMesh) -> np.ndarray | None:
    if limiting not in LIMITING_MODES:
        raise ConfigError(f"unknown limiting mode {limiting!r}; expected one of {LIMITING_MODES}")
    if limiting == "first_order":
        return None
    if limiting == "everywhere":
        return np.ones(mesh.shape, dtype=bool)
    if mask is None:
        raise ConfigError("restricted limiting needs a troubled mask")
    return extend_mask_to_ghosts(mask.flags, mesh)


def advance_unsteady(
    field: CellField,
    bc: BoundaryConditions,
    dt: float,
    limiting: str,
    k_threshold: float | None,
) -> tuple[StepStats, TroubledMask | None, float]:
    """One SSP-RK2 step; with restricted limiting the mask is recomputed from
    the current state before each stage's reconstruction.

    If either stage would produce an inadmissible state the whole step is
    retried once with dt/2; the step size actually taken is returned.
    """
    mesh, gas = field.mesh, field.gas
    interior = mesh.interior
    q0 = field.q[interior].copy()

    def stage_residual():
        bc.apply(field.q)
        mask = None
        if limiting == "restricted":
            mask = flag_troubled_cells(field.q[..., 0], mesh, IndicatorConfig(k_threshold))
        limited = _limited_flags(limiting, mask, mesh)
        return compute_residual(field.q, mesh, gas, limited), mask

    for attempt, scale in enumerate((1.0, 0.5)):
        dt_used = scale * dt
        res1, mask1 = stage_residual()
        field.q[interior] = q0 + dt_used * res1.R
        if not _interior_admissible(field.q[interior]).all():
            field.q[interior] = q0
            continue
        res2, _ = stage_residual()
        field.q[interior] = 0.5 * (q0 + field.q[interior] + dt_used * res2.R)
        if not _interior_admissible(field.q[interior]).all():
            field.q[interior] = q0
            continue
        field.iteration += 1
        stats = StepStats(
            rn=residual_norm(res1.R, mesh),
            fallback_faces=res1.fallback_faces + res2.fallback_faces,
            rejected=attempt,
            boundary_flux=0.5 * dt_used * (res1.boundary_flux + res2.boundary_flux),
            mask_count=mask1.count if mask1 is not None else None,
        )
        return stats, mask1, dt_used

    raise InadmissibleStateError(
        f"RK2 step produced inadmissible cells even after halving dt "
        f"(iteration {field.iteration})"
    )


def global_time_step(field: CellField, cfl: float) -> float:
    """CFL-bounded step from the worst-case interior signal speed."""
    w = field.primitives_interior()
    a = field.gas.sound_speed(w[..., 0], w[..., 3])
    fastest = max(float(np.max(np.abs(w[..., 1]) + a)), float(np.max(np.abs(w[..., 2]) + a)))
    return cfl * min(field.mesh.dx, field.mesh.dy) / fastest


def solve_unsteady(
    field: CellField,
    bc: BoundaryConditions,
    limiting: str,
    k_threshold: float | None,
    final_time: float,
    cfl: float = 0.2,
    max_iterations: int = 15000,
) -> tuple[ResidualHistory, SolveStats, TroubledMask | None]:
    """March to ``final_time`` with dynamic flagging; mutates ``field``."""
    stats = SolveStats(boundary_flux_integral=np.zeros(4))
    t0 = time.perf_counter()
    rns: list[float] = []
    t = 0.0
    last_mask: TroubledMask | None = None
    # tiny slack absorbs roundoff in the t accumulation near final_time
    while t < final_time * (1.0 - 1e-12):
        if len(rns) >= max_iterations:
            raise NumericalError(
                f"unsteady run did not reach t = {final_time} within {max_iterations} iterations"
            )
        dt = min(global_time_step(field, cfl), final_time - t)
        step, mask, dt_used = advance_unsteady(field, bc, dt, limiting, k_threshold)
        t += dt_used
        rns.append(step.rn)
        stats.times.append(t)
        stats.fallback_faces += step.fallback_faces
        stats.rejected_steps += step.rejected
        stats.boundary_flux_integral += step.boundary_flux
        if step.mask_count is not None:
            stats.mask_counts.append(step.mask_count)
        if mask is not None:
            last_mask = mask
    stats.wall_time = time.perf_counter() - t0
    return ResidualHistory(rn=np.array(rns), converged=True, stalled=False), stats, last_mask


@dataclass
class RunConfig:
    """Everything a run needs besides the case itself."""

    mode: str = "steady"  # steady | unsteady
    limiting: str = "everywhere"
    k_threshold: float | None = None
    # forward Euler with the kappa = 1/3 reconstruction needs this much margin:
    # restricted runs go inadmissible during shock re-sharpening at cfl >= 0.25
    cfl: float = 0.2
    max_iterations: int = 15000
    convergence_tol: float = 1e-14
    final_time: float | None = None
    nx: int | None = None
    ny: int | None = None

    def __post_init__(self):
        if self.mode not in ("steady", "unsteady"):
            raise ConfigError(f"mode must be steady or unsteady, got {self.mode!r}")
        if self.limiting not in LIMITING_MODES:
            raise ConfigError(f"limiting must be one of {LIMITING_MODES}, got {self.limiting!r}")
        if self.limiting == "restricted" and self.k_threshold is None:
            raise ConfigError("limiting = restricted requires the key 'k'")
        if not (0.0 < self.cfl <= 1.0):
            raise ConfigError(f"cfl must lie in (0, 1], got {self.cfl}")
        if self.max_iterations < 1:
            raise ConfigError("max_iterations must be >= 1")
        if not self.convergence_tol > 0.0:
            raise ConfigError("convergence tolerance must be positive")


@dataclass
class StageResult:
    field: CellField
    history: ResidualHistory
    stats: SolveStats


@dataclass
class RunResult:
    field: CellField
    history: ResidualHistory
    mask: TroubledMask | None
    stats: SolveStats
    first_order: StageResult | None = None


def run_first_order(config: RunConfig, case) -> StageResult:
    """The steady first-order stage shared by all steady pipelines."""
    mesh = case.build_mesh(config.nx, config.ny)
    bc = make_boundary_conditions(case, mesh)
    field = initialize_field(case, mesh, bc)
    history, stats = solve_steady(
        field, bc, "first_order", None,
        cfl=config.cfl, convergence_tol=config.convergence_tol,
        max_iterations=config.max_iterations,
    )
    return StageResult(field=field, history=history, stats=stats)


def run(config: RunConfig, case, first_order: StageResult | None = None) -> RunResult:
    """Full pipeline for one run configuration.

    Steady high-order runs start from the converged first-order solution and
    keep the mask flagged on it fixed; ``first_order`` lets callers reuse a
    previously computed stage (the mesh/cfl/tolerances must match).  Unsteady
    runs march from the case initial condition with per-iteration flagging.
    """
    if config.mode == "unsteady":
        if case.final_time is None and config.final_time is None:
            raise ConfigError(f"case {case.name} defines no final_time for unsteady mode")
        mesh = case.build_mesh(config.nx, config.ny)
        bc = make_boundary_conditions(case, mesh)
        field = initialize_field(case, mesh, bc)
        history, stats, mask = solve_unsteady(
            field, bc, config.limiting, config.k_threshold,
            final_time=config.final_time or case.final_time,
            cfl=config.cfl, max_iterations=config.max_iterations,
        )
        return RunResult(field=field, history=history, mask=mask, stats=stats)

    stage_a = first_order or run_first_order(config, case)
    if config.limiting == "first_order":
        return RunResult(
            field=stage_a.field, history=stage_a.history, mask=None,
            stats=stage_a.stats, first_order=stage_a,
        )

    mesh = stage_a.field.mesh
    bc = make_boundary_conditions(case, mesh)
    if config.limiting == "restricted":
        bc.apply(stage_a.field.q)
        mask = flag_troubled_cells(stage_a.field.q[..., 0], mesh, IndicatorConfig(config.k_threshold))
    else:
        mask = TroubledMask.all_true(mesh)
    field = stage_a.field.copy()
    field.iteration = 0
    history, stats = solve_steady(
        field, bc, config.limiting, mask,
        cfl=config.cfl, convergence_tol=config.convergence_tol,
        max_iterations=config.max_iterations,
    )
    return RunResult(field=field, history=history, mask=mask, stats=stats, first_order=stage_a)
