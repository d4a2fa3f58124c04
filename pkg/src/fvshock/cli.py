"""Command-line front end.

    fvshock run        --config run.cfg --out results/
    fvshock flag       --config flag.cfg --out results/
    fvshock compare    --config cmp.cfg --out results/
    fvshock cases-list

Exit codes: 0 success, 2 configuration error, 3 numerical failure, 4 I/O
error.  Existing artifacts are never overwritten unless --force is given.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import artifacts
from .cases import case_summaries, get_case
from .config import FileConfig, LimitingSetting, load_config
from .diagnostics import build_line_profile, l2_linf_window_report, monotonicity_report
from .errors import ConfigError, NumericalError
from .indicator import IndicatorConfig, flag_troubled_cells
from .solver import RunResult, run, run_first_order

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fvshock", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, needs_config in (("run", True), ("flag", True), ("compare", True), ("cases-list", False)):
        p = sub.add_parser(name)
        if needs_config:
            p.add_argument("--config", required=True, help="key = value run configuration file")
            p.add_argument("--out", help="output directory (overrides the config's out_dir)")
            p.add_argument("--force", action="store_true", help="overwrite existing artifacts")
    return parser


def _prepare_outdir(outdir: Path, targets: list[Path], force: bool) -> None:
    outdir.mkdir(parents=True, exist_ok=True)
    if not force:
        existing = [str(t) for t in targets if t.exists()]
        if existing:
            raise FileExistsError(
                f"refusing to overwrite existing artifacts (use --force): {', '.join(existing)}"
            )


def _diagnostics_rows(result: RunResult, case, setting: LimitingSetting):
    """(report rows, details, note); rows is None when diagnostics cannot run."""
    if case.exact is None or case.shock is None or case.sample_y is None:
        return None, None, "no exact solution for this case: no line diagnostics"
    try:
        profile = build_line_profile(
            result.field.density(), result.field.mesh, case.sample_y, case.exact, case.shock
        )
        report = monotonicity_report(profile)
        l2w, linfw = l2_linf_window_report(profile)
    except ValueError as exc:
        return None, None, f"line diagnostics unavailable: {exc}"
    rows = artifacts.report_rows(case.name, setting.label, setting.k, report, l2w, linfw)
    return rows, (profile, report, l2w, linfw), None


def cmd_run(cfg: FileConfig, outdir: Path, force: bool) -> int:
    if len(cfg.settings) != 1:
        raise ConfigError("the run command takes exactly one limiting setting")
    setting = cfg.settings[0]
    case = get_case(cfg.case_name, cfg.nx, cfg.ny)
    config = cfg.run_config(setting)

    names = ["history.csv", "field.csv", "mask.csv", "report.csv"]
    if cfg.write_vtk:
        names.append("field.vtk")
    targets = [outdir / n for n in names]
    _prepare_outdir(outdir, targets, force)

    result = run(config, case)
    mesh = result.field.mesh
    meta = artifacts.standard_meta(cfg.config_hash, case.name, cfg.mode, setting.k, mesh)

    artifacts.write_history_csv(outdir / "history.csv", result.history, meta)
    artifacts.write_field_csv(outdir / "field.csv", result.field, meta)
    _write_mask(outdir / "mask.csv", result, meta)
    rows, _, note = _diagnostics_rows(result, case, setting)
    artifacts.write_report_csv(outdir / "report.csv", rows or [], meta, note=note)
    if cfg.write_vtk:
        artifacts.write_vtk_density(outdir / "field.vtk", result.field)

    print(f"run complete: {result.history.iterations_used} iterations, "
          f"converged={result.history.converged}, artifacts in {outdir}")
    return EXIT_OK


def _write_mask(path: Path, result: RunResult, meta: dict) -> None:
    from .indicator import TroubledMask, indicator_field

    mesh = result.field.mesh
    mask = result.mask
    values = None
    if mask is None:
        mask = TroubledMask.all_false(mesh)
    if mask.indicator_values is None:
        source = result.first_order.field if result.first_order else result.field
        values = indicator_field(source.q[..., 0], mesh)
    artifacts.write_mask_csv(path, mask, mesh, meta, values=values)


def cmd_flag(cfg: FileConfig, outdir: Path, force: bool) -> int:
    if not cfg.k_list:
        raise ConfigError("the flag command requires a non-empty 'k_list'")
    case = get_case(cfg.case_name, cfg.nx, cfg.ny)
    config = cfg.run_config(LimitingSetting("first_order"))

    mask_names = [f"mask_k{k:g}.csv" for k in cfg.k_list]
    targets = [outdir / n for n in mask_names] + [outdir / "flag_summary.csv"]
    _prepare_outdir(outdir, targets, force)

    stage = run_first_order(config, case)
    mesh = stage.field.mesh
    summary = []
    for k, name in zip(cfg.k_list, mask_names):
        mask = flag_troubled_cells(stage.field.q[..., 0], mesh, IndicatorConfig(k))
        meta = artifacts.standard_meta(cfg.config_hash, case.name, cfg.mode, k, mesh)
        artifacts.write_mask_csv(outdir / name, mask, mesh, meta)
        pre = post = None
        if case.shock is not None:
            x, y = mesh.center_grids()
            side = case.shock.signed_distance(x, y)
            pre = int(np.count_nonzero(mask.flags & (side < 0.0)))
            post = int(np.count_nonzero(mask.flags & (side >= 0.0)))
        summary.append((k, mask.count, pre, post))
        print(f"K = {k:g}: {mask.count} troubled cells" +
              (f" ({pre} pre-shock, {post} post-shock)" if pre is not None else ""))
    meta = artifacts.standard_meta(cfg.config_hash, case.name, cfg.mode, None, mesh)
    artifacts.write_flag_summary_csv(outdir / "flag_summary.csv", summary, meta)
    return EXIT_OK


def cmd_compare(cfg: FileConfig, outdir: Path, force: bool) -> int:
    if len(cfg.settings) < 2:
        raise ConfigError("the compare command needs at least two limiting settings")
    if cfg.mode != "steady":
        raise ConfigError("compare is defined for steady runs")
    case = get_case(cfg.case_name, cfg.nx, cfg.ny)

    per_setting = [(s, s.label) for s in cfg.settings]
    targets = [outdir / "compare.csv", outdir / "exact_line.csv"]
    for _, label in per_setting:
        targets += [outdir / f"{kind}_{label}.csv" for kind in ("history", "field", "mask")]
    _prepare_outdir(outdir, targets, force)

    stage = run_first_order(cfg.run_config(cfg.settings[0]), case)
    mesh = stage.field.mesh
    rows = []
    exact_profile = None
    for setting, label in per_setting:
        result = run(cfg.run_config(setting), case, first_order=stage)
        meta = artifacts.standard_meta(cfg.config_hash, case.name, cfg.mode, setting.k, mesh)
        meta["limiting"] = setting.label
        artifacts.write_history_csv(outdir / f"history_{label}.csv", result.history, meta)
        artifacts.write_field_csv(outdir / f"field_{label}.csv", result.field, meta)
        _write_mask(outdir / f"mask_{label}.csv", result, meta)
        _, diag, note = _diagnostics_rows(result, case, setting)
        if diag is None:
            raise ConfigError(f"compare needs line diagnostics for {case.name}: {note}")
        profile, report, l2w, linfw = diag
        exact_profile = profile
        rows.append({
            "case": case.name, "mode": setting.label,
            "K": "" if setting.k is None else f"{setting.k:g}",
            "L2": l2w, "Linf": linfw,
            "pre_Linf": report.pre.linf, "pre_TV": report.pre.tv,
            "post_Linf": report.post.linf, "post_TV": report.post.tv,
            "mu_overall": report.mu,
            "iterations": result.history.iterations_used,
            "wall_time_s": result.stats.wall_time,
        })
        print(f"{label}: {result.history.iterations_used} iterations, mu = {report.mu:.6g}")

    meta = artifacts.standard_meta(cfg.config_hash, case.name, cfg.mode, None, mesh)
    artifacts.write_compare_csv(outdir / "compare.csv", rows, meta)
    artifacts.write_exact_line_csv(outdir / "exact_line.csv", exact_profile, meta, case.sample_y)
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "cases-list":
            for line in case_summaries():
                print(line)
            return EXIT_OK
        cfg = load_config(args.config)
        out = args.out or cfg.out_dir
        if out is None:
            raise ConfigError("no output directory: pass --out or set out_dir in the config")
        outdir = Path(out)
        if args.command == "run":
            return cmd_run(cfg, outdir, args.force)
        if args.command == "flag":
            return cmd_flag(cfg, outdir, args.force)
        return cmd_compare(cfg, outdir, args.force)
    except (ConfigError, KeyError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
