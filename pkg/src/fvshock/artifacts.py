"""CSV and VTK artifact writers.

Every file opens with ``#`` comment lines recording the config hash, case,
mode, threshold and grid, followed by a CSV header row.  Floats are written
with shortest round-trip formatting, so identical runs produce bit-identical
files.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from . import indicator
from .diagnostics import LineProfile, ShockLineReport
from .mesh import StructuredMesh
from .solver import CellField, ResidualHistory
from .indicator import TroubledMask


def fmt(value) -> str:
    """Round-trip-safe scalar formatting."""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if value is None:
        return ""
    return repr(float(value))


def header_lines(kind: str, meta: dict) -> list[str]:
    lines = [f"# fvshock {kind}"]
    for key, value in meta.items():
        lines.append(f"# {key}: {value}")
    return lines


def standard_meta(config_hash: str, case: str, mode: str, k, mesh: StructuredMesh) -> dict:
    return {
        "config_hash": config_hash,
        "case": case,
        "mode": mode,
        "K": "" if k is None else f"{k:g}",
        "grid": f"{mesh.nx}x{mesh.ny}",
        "indicator_formula": indicator.FORMULA_ID,
    }


def _write(path: Path, lines: list[str]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")


def write_history_csv(path: Path, history: ResidualHistory, meta: dict) -> None:
    lines = header_lines("residual-history", meta)
    lines.append("iteration,RN")
    lines.extend(f"{i + 1},{fmt(rn)}" for i, rn in enumerate(history.rn))
    _write(path, lines)


def write_field_csv(path: Path, field: CellField, meta: dict) -> None:
    mesh = field.mesh
    w = field.primitives_interior()
    xs, ys = mesh.x_centers(), mesh.y_centers()
    lines = header_lines("field", meta)
    lines.append("i,j,x,y,rho,u,v,p")
    for j in range(mesh.ny):
        for i in range(mesh.nx):
            rho, u, v, p = w[i, j]
            lines.append(
                f"{i},{j},{fmt(xs[i])},{fmt(ys[j])},{fmt(rho)},{fmt(u)},{fmt(v)},{fmt(p)}"
            )
    _write(path, lines)


def write_mask_csv(path: Path, mask: TroubledMask, mesh: StructuredMesh, meta: dict,
                   values: np.ndarray | None = None) -> None:
    vals = mask.indicator_values if values is None else values
    lines = header_lines("troubled-mask", meta)
    lines.append("i,j,indicator_value,flagged")
    for j in range(mesh.ny):
        for i in range(mesh.nx):
            v = "" if vals is None else fmt(vals[i, j])
            lines.append(f"{i},{j},{v},{fmt(bool(mask.flags[i, j]))}")
    _write(path, lines)


def report_rows(case: str, mode: str, k, report: ShockLineReport, window_l2: float, window_linf: float):
    """The three CSV rows (pre, post, overall) of one diagnostics report."""
    kval = "" if k is None else f"{k:g}"
    return [
        (case, mode, kval, "pre", report.pre.l2, report.pre.linf, report.pre.tv, report.mu),
        (case, mode, kval, "post", report.post.l2, report.post.linf, report.post.tv, report.mu),
        (case, mode, kval, "overall", window_l2, report.overall_linf, report.overall_tv, report.mu),
    ]


def write_report_csv(path: Path, rows, meta: dict, note: str | None = None) -> None:
    lines = header_lines("diagnostics-report", meta)
    if note:
        lines.append(f"# {note}")
    lines.append("case,mode,K,region,L2,Linf,TV,mu_overall")
    for case, mode, k, region, l2, linf, tv, mu in rows:
        lines.append(f"{case},{mode},{k},{region},{fmt(l2)},{fmt(linf)},{fmt(tv)},{fmt(mu)}")
    _write(path, lines)


def write_exact_line_csv(path: Path, profile: LineProfile, meta: dict, y: float) -> None:
    lines = header_lines("exact-line", meta)
    lines.append(f"# y: {fmt(y)}")
    lines.append(f"# shock_x: {fmt(profile.xs[profile.shock_index])}")
    lines.append("x,rho_exact")
    lines.extend(f"{fmt(x)},{fmt(r)}" for x, r in zip(profile.xs, profile.rho_exact))
    _write(path, lines)


COMPARE_COLUMNS = (
    "case,mode,K,L2,Linf,pre_Linf,pre_TV,post_Linf,post_TV,mu_overall,iterations,wall_time_s"
)


def write_compare_csv(path: Path, rows, meta: dict) -> None:
    lines = header_lines("compare", meta)
    lines.append("# wall_time_s is informational and excluded from determinism guarantees")
    lines.append(COMPARE_COLUMNS)
    for row in rows:
        lines.append(
            ",".join(
                [row["case"], row["mode"], row["K"]]
                + [fmt(row[c]) for c in ("L2", "Linf", "pre_Linf", "pre_TV", "post_Linf", "post_TV", "mu_overall")]
                + [str(row["iterations"]), f"{row['wall_time_s']:.3f}"]
            )
        )
    _write(path, lines)


def write_flag_summary_csv(path: Path, rows, meta: dict) -> None:
    lines = header_lines("flag-summary", meta)
    lines.append("K,count,pre_count,post_count")
    for k, count, pre, post in rows:
        pre_s = "" if pre is None else str(pre)
        post_s = "" if post is None else str(post)
        lines.append(f"{k:g},{count},{pre_s},{post_s}")
    _write(path, lines)


def write_vtk_density(path: Path, field: CellField, title: str = "density") -> None:
    """Legacy-ASCII VTK structured points of the interior density."""
    mesh = field.mesh
    rho = field.density()
    lines = [
        "# vtk DataFile Version 3.0",
        title,
        "ASCII",
        "DATASET STRUCTURED_POINTS",
        f"DIMENSIONS {mesh.nx} {mesh.ny} 1",
        f"ORIGIN {fmt(mesh.x0 + 0.5 * mesh.dx)} {fmt(mesh.y0 + 0.5 * mesh.dy)} 0.0",
        f"SPACING {fmt(mesh.dx)} {fmt(mesh.dy)} 1.0",
        f"POINT_DATA {mesh.nx * mesh.ny}",
        "SCALARS density double",
        "LOOKUP_TABLE default",
    ]
    for j in range(mesh.ny):
        lines.append(" ".join(fmt(rho[i, j]) for i in range(mesh.nx)))
    _write(path, lines)
