"""Built-in test cases: exact oblique-shock fields and an unsteady 2D Riemann problem.

Oblique-shock geometry
----------------------
The incoming flow runs in +x.  The shock is a straight line entering through
the top boundary at ``shock_top_x`` and descending to the right at the wave
angle beta measured from the flow direction, so it exits through the right
boundary.  The lower-left side of the line is the undisturbed (pre-shock)
region; the upper-right side carries the compressed post-shock state with the
velocity deflected downward by the flow-deflection angle.  This layout keeps
the left and bottom boundaries entirely upstream (plain supersonic inflow),
puts both states on the top boundary (exact Dirichlet), and sends everything
out through the right boundary (supersonic outflow).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .euler import GasModel, PrimitiveState
from .indicator import TroubledMask
from .mesh import StructuredMesh
from .solver import BoundarySpec

# where the shock meets the top boundary (domain units); chosen so the shock
# crosses the y = 0.5 sampling line mid-domain with room for 20-cell windows
SHOCK_TOP_X = 0.05


@dataclass(frozen=True)
class ObliqueShockSolution:
    """Exact two-state solution across a straight oblique shock.

    States are expressed in the case frame described in the module docstring:
    pre-shock velocity along +x, post-shock velocity deflected downward
    (negative v).  ``theta`` is the flow-deflection angle in degrees.
    """

    m1: float
    beta: float
    gamma: float
    pre: PrimitiveState
    post: PrimitiveState
    theta: float

    @property
    def density_ratio(self) -> float:
        return self.post.rho / self.pre.rho

    @property
    def pressure_ratio(self) -> float:
        return self.post.p / self.pre.p

    def shock_normal(self) -> np.ndarray:
        """Unit normal of the shock line, pointing into the post-shock side."""
        b = math.radians(self.beta)
        return np.array([math.sin(b), math.cos(b)])

    def rankine_hugoniot_residuals(self) -> dict[str, float]:
        """Relative residuals of the four jump conditions (all ~0 when exact)."""
        n = self.shock_normal()
        t = np.array([n[1], -n[0]])
        g = self.gamma
        res = {}
        vn1 = self.pre.u * n[0] + self.pre.v * n[1]
        vn2 = self.post.u * n[0] + self.post.v * n[1]
        vt1 = self.pre.u * t[0] + self.pre.v * t[1]
        vt2 = self.post.u * t[0] + self.post.v * t[1]
        m1 = self.pre.rho * vn1
        m2 = self.post.rho * vn2
        res["mass"] = (m1 - m2) / abs(m1)
        p1 = self.pre.rho * vn1**2 + self.pre.p
        p2 = self.post.rho * vn2**2 + self.post.p
        res["normal_momentum"] = (p1 - p2) / abs(p1)
        res["tangential_velocity"] = (vt1 - vt2) / max(abs(vt1), 1.0)
        h1 = g / (g - 1.0) * self.pre.p / self.pre.rho + 0.5 * vn1**2
        h2 = g / (g - 1.0) * self.post.p / self.post.rho + 0.5 * vn2**2
        res["energy"] = (h1 - h2) / abs(h1)
        return res


def oblique_shock_exact(m1: float, beta_deg: float, gamma: float = 1.4) -> ObliqueShockSolution:
    """Exact jump across an oblique shock with wave angle beta (degrees).

    m1: upstream Mach number
    beta_deg: angle between the shock front and the incoming flow; must lie
        between the Mach angle asin(1/m1) and 90 degrees (attached range)
    Returns the two-state solution with unit upstream density and pressure.
    """
    if m1 < 1.0:
        raise ValueError(f"upstream flow must be supersonic, got M1 = {m1}")
    mach_angle = math.degrees(math.asin(1.0 / m1))
    if not (mach_angle <= beta_deg <= 90.0):
        raise ValueError(
            f"beta = {beta_deg} deg outside the attached range [{mach_angle:.4f}, 90] for M1 = {m1}"
        )
    b = math.radians(beta_deg)
    mn1 = m1 * math.sin(b)
    mn1sq = mn1 * mn1

    rho_ratio = (gamma + 1.0) * mn1sq / ((gamma - 1.0) * mn1sq + 2.0)
    p_ratio = 1.0 + 2.0 * gamma * (mn1sq - 1.0) / (gamma + 1.0)

    rho1, p1 = 1.0, 1.0
    a1 = math.sqrt(gamma * p1 / rho1)
    speed1 = m1 * a1
    vn1 = speed1 * math.sin(b)
    vt = speed1 * math.cos(b)
    vn2 = vn1 / rho_ratio
    theta = beta_deg - math.degrees(math.atan2(vn2, vt)) if vt > 0.0 else 0.0
    speed2 = math.hypot(vn2, vt)
    th = math.radians(theta)

    pre = PrimitiveState(rho=rho1, u=speed1, v=0.0, p=p1)
    post = PrimitiveState(
        rho=rho1 * rho_ratio,
        u=speed2 * math.cos(th),
        v=-speed2 * math.sin(th),
        p=p1 * p_ratio,
    )
    return ObliqueShockSolution(m1=m1, beta=beta_deg, gamma=gamma, pre=pre, post=post, theta=theta)


def theta_beta_m(beta_deg: float, m1: float, gamma: float = 1.4) -> float:
    """Flow-deflection angle (degrees) from the wave angle and Mach number."""
    b = math.radians(beta_deg)
    mn1sq = (m1 * math.sin(b)) ** 2
    tan_theta = 2.0 / math.tan(b) * (mn1sq - 1.0) / (m1 * m1 * (gamma + math.cos(2.0 * b)) + 2.0)
    return math.degrees(math.atan(tan_theta))


@dataclass(frozen=True)
class ShockLine:
    """Straight shock through ``anchor`` descending at ``beta`` degrees to +x.

    Signed distance is measured along the downstream normal: negative on the
    pre-shock (lower-left) side, positive on the post-shock side.
    """

    anchor_x: float
    anchor_y: float
    beta: float

    def normal(self) -> tuple[float, float]:
        b = math.radians(self.beta)
        return (math.sin(b), math.cos(b))

    def signed_distance(self, x, y):
        nx, ny = self.normal()
        return (np.asarray(x) - self.anchor_x) * nx + (np.asarray(y) - self.anchor_y) * ny

    def x_at_y(self, y):
        """x-coordinate where the shock crosses height y."""
        return self.anchor_x + (self.anchor_y - np.asarray(y)) / math.tan(math.radians(self.beta))


FieldEvaluator = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class CaseDefinition:
    name: str
    description: str
    bounds: tuple[float, float, float, float]
    gas: GasModel
    bcs: dict[str, BoundarySpec]
    initial: FieldEvaluator
    exact: FieldEvaluator | None = None
    sample_y: float | None = None
    shock: ShockLine | None = None
    final_time: float | None = None
    default_nx: int = 100
    default_ny: int = 100
    oblique: ObliqueShockSolution | None = None

    def build_mesh(self, nx: int | None = None, ny: int | None = None) -> StructuredMesh:
        x0, y0, x1, y1 = self.bounds
        return StructuredMesh(
            nx=nx or self.default_nx, ny=ny or self.default_ny, x0=x0, y0=y0, x1=x1, y1=y1
        )

    def summary(self) -> str:
        return f"{self.name}: {self.description}"


def _two_state_evaluator(shock: ShockLine, pre: PrimitiveState, post: PrimitiveState) -> FieldEvaluator:
    pre_arr, post_arr = pre.as_array(), post.as_array()

    def evaluate(x, y):
        side = shock.signed_distance(x, y)
        return np.where((side >= 0.0)[..., None], post_arr, pre_arr)

    return evaluate


def oblique_shock_case(
    name: str,
    beta_deg: float,
    nx: int = 100,
    ny: int = 100,
    m1: float = 3.0,
    shock_top_x: float = SHOCK_TOP_X,
    gamma: float = 1.4,
) -> CaseDefinition:
    """Steady oblique-shock case on the unit square (see module docstring)."""
    gas = GasModel(gamma)
    sol = oblique_shock_exact(m1, beta_deg, gamma)
    shock = ShockLine(anchor_x=shock_top_x, anchor_y=1.0, beta=beta_deg)
    if shock.x_at_y(0.0) <= 1.0:
        raise ValueError(
            f"shock at beta = {beta_deg} deg exits through the bottom boundary; "
            "this layout expects it to leave through the right boundary"
        )
    evaluate = _two_state_evaluator(shock, sol.pre, sol.post)
    return CaseDefinition(
        name=name,
        description=(
            f"M = {m1} oblique shock at {beta_deg} deg to the flow, entering the top "
            f"boundary at x = {shock_top_x}"
        ),
        bounds=(0.0, 0.0, 1.0, 1.0),
        gas=gas,
        bcs={
            "west": BoundarySpec("supersonic_inflow", state=sol.pre),
            "south": BoundarySpec("supersonic_inflow", state=sol.pre),
            "north": BoundarySpec("exact_dirichlet"),
            "east": BoundarySpec("supersonic_outflow"),
        },
        initial=evaluate,
        exact=evaluate,
        sample_y=0.5,
        shock=shock,
        default_nx=nx,
        default_ny=ny,
        oblique=sol,
    )


def aligned_oblique_shock_case(nx: int = 100, ny: int = 100) -> CaseDefinition:
    return oblique_shock_case("aligned-oblique-shock", beta_deg=40.0, nx=nx, ny=ny)


def nonaligned_oblique_shock_case(nx: int = 100, ny: int = 100, beta_deg: float = 30.0) -> CaseDefinition:
    name = f"nonaligned-oblique-shock-{beta_deg:g}"
    return oblique_shock_case(name, beta_deg=beta_deg, nx=nx, ny=ny)


# Four-quadrant shock-dominated initial condition (rho, u, v, p); quadrants
# meet at (0.5, 0.5) and every interface carries a shock.
RIEMANN2D_STATES = {
    "ne": PrimitiveState(rho=1.5, u=0.0, v=0.0, p=1.5),
    "nw": PrimitiveState(rho=0.5323, u=1.206, v=0.0, p=0.3),
    "sw": PrimitiveState(rho=0.138, u=1.206, v=1.206, p=0.029),
    "se": PrimitiveState(rho=0.5323, u=0.0, v=1.206, p=0.3),
}
RIEMANN2D_CENTER = (0.5, 0.5)
RIEMANN2D_FINAL_TIME = 0.15


def riemann2d_case(nx: int = 100, ny: int = 100) -> CaseDefinition:
    """Unsteady four-quadrant Riemann problem with outflow on all sides.

    The default final time keeps the interacting waves inside the domain.
    """
    cx, cy = RIEMANN2D_CENTER
    arr = {k: s.as_array() for k, s in RIEMANN2D_STATES.items()}

    def initial(x, y):
        x, y = np.asarray(x), np.asarray(y)
        east = (x >= cx)[..., None]
        north = (y >= cy)[..., None]
        return np.where(
            north,
            np.where(east, arr["ne"], arr["nw"]),
            np.where(east, arr["se"], arr["sw"]),
        )

    outflow = BoundarySpec("supersonic_outflow")
    return CaseDefinition(
        name="riemann-2d",
        description="four-quadrant 2D Riemann problem (shock-dominated), dynamic flagging",
        bounds=(0.0, 0.0, 1.0, 1.0),
        gas=GasModel(1.4),
        bcs={"west": outflow, "east": outflow, "south": outflow, "north": outflow},
        initial=initial,
        final_time=RIEMANN2D_FINAL_TIME,
        default_nx=nx,
        default_ny=ny,
    )


def freestream_case(nx: int = 50, ny: int = 50, m: float = 3.0) -> CaseDefinition:
    """Uniform supersonic flow; any scheme must hold it exactly."""
    gas = GasModel(1.4)
    state = PrimitiveState(rho=1.0, u=m * gas.sound_speed(1.0, 1.0), v=0.0, p=1.0)
    arr = state.as_array()

    def initial(x, y):
        return np.broadcast_to(arr, np.shape(np.asarray(x)) + (4,)).copy()

    outflow = BoundarySpec("supersonic_outflow")
    return CaseDefinition(
        name="freestream",
        description=f"uniform M = {m} flow, all-outflow boundaries",
        bounds=(0.0, 0.0, 1.0, 1.0),
        gas=gas,
        bcs={"west": outflow, "east": outflow, "south": outflow, "north": outflow},
        initial=initial,
        default_nx=nx,
        default_ny=ny,
    )


def shock_straddling_mask(mesh: StructuredMesh, case: CaseDefinition, per_side: int = 1) -> TroubledMask:
    """Mask flagging only the ``per_side`` cells on each side of the exact shock
    in every interior row the shock crosses.

    With per_side = 1 this reproduces a deliberately starved mask: one
    pre-shock and one post-shock cell per row.
    """
    if case.shock is None:
        raise ValueError(f"case {case.name} has no shock geometry")
    flags = np.zeros((mesh.nx, mesh.ny), dtype=bool)
    xc = mesh.x_centers()
    for j, y in enumerate(mesh.y_centers()):
        x_cross = float(case.shock.x_at_y(y))
        if not (mesh.x0 < x_cross < mesh.x1):
            continue
        i_s = int(np.searchsorted(xc, x_cross))  # first center at/after the crossing
        lo, hi = max(i_s - per_side, 0), min(i_s + per_side, mesh.nx)
        flags[lo:hi, j] = True
    return TroubledMask(flags=flags)


CASE_BUILDERS: dict[str, Callable[..., CaseDefinition]] = {
    "aligned-oblique-shock": aligned_oblique_shock_case,
    "nonaligned-oblique-shock-30": nonaligned_oblique_shock_case,
    "riemann-2d": riemann2d_case,
    "freestream": freestream_case,
}


def get_case(name: str, nx: int | None = None, ny: int | None = None) -> CaseDefinition:
    if name not in CASE_BUILDERS:
        known = ", ".join(sorted(CASE_BUILDERS))
        raise KeyError(f"unknown case {name!r}; available: {known}")
    kwargs = {}
    if nx is not None:
        kwargs["nx"] = nx
    if ny is not None:
        kwargs["ny"] = ny
    return CASE_BUILDERS[name](**kwargs)


def case_summaries() -> list[str]:
    return [get_case(name).summary() for name in sorted(CASE_BUILDERS)]
