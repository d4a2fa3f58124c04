"""Density along a horizontal sampling line: numerical markers over the exact step."""

from __future__ import annotations

import argparse
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .csvio import read_artifact, run_label


def plot_density_line(field_csv, exact_csv, y: float, out_png) -> Path:
    field = read_artifact(field_csv, required=("x", "y", "rho"))
    exact = read_artifact(exact_csv, required=("x", "rho_exact"))

    ys = np.unique(field.column("y"))
    y_row = ys[np.argmin(np.abs(ys - y))]
    on_row = field.column("y") == y_row
    order = np.argsort(field.column("x")[on_row])
    x_num = field.column("x")[on_row][order]
    rho_num = field.column("rho")[on_row][order]
    if len(x_num) != len(exact.column("x")):
        raise ValueError("field row and exact overlay have different lengths (grids differ)")

    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(exact.column("x"), exact.column("rho_exact"), drawstyle="steps-mid",
            color="black", lw=1.2, label="exact")
    ax.plot(x_num, rho_num, "o", ms=3.5, mfc="none", color="tab:blue",
            label=run_label(field.meta, "numerical"))
    shock_x = field.meta.get("shock_x") or exact.meta.get("shock_x")
    if shock_x is not None:
        ax.axvline(float(shock_x), color="tab:red", ls="--", lw=0.9)
        ax.annotate("shock", (float(shock_x), ax.get_ylim()[1]),
                    xytext=(4, -12), textcoords="offset points", color="tab:red", fontsize=8)
    ax.set_xlabel("x")
    ax.set_ylabel("density")
    ax.set_title(f"density along y = {y_row:g}")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    out = Path(out_png)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="plot a density line with exact overlay")
    parser.add_argument("field_csv")
    parser.add_argument("exact_csv")
    parser.add_argument("--y", type=float, default=0.5, help="sampling height (default 0.5)")
    parser.add_argument("-o", "--out", required=True, help="output PNG path")
    args = parser.parse_args(argv)
    plot_density_line(args.field_csv, args.exact_csv, args.y, args.out)
    print(args.out)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
