"""Troubled-cell maps: flagged cells over the grid, one color per mask file."""

from __future__ import annotations

import argparse
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .csvio import read_artifact

COLORS = ("tab:blue", "tab:orange", "tab:green", "tab:red", "tab:purple")


def plot_mask(mask_csvs, out_png) -> Path:
    if not mask_csvs:
        raise ValueError("need at least one mask CSV")
    fig, ax = plt.subplots(figsize=(5.5, 5.5))
    grid_note = ""
    for idx, path in enumerate(mask_csvs):
        mask = read_artifact(path, required=("i", "j", "flagged"))
        flagged = mask.column("flagged") > 0.5
        label = f"K = {mask.meta['K']}" if mask.meta.get("K") else Path(path).stem
        ax.scatter(mask.column("i")[flagged], mask.column("j")[flagged],
                   s=6, marker="s", color=COLORS[idx % len(COLORS)],
                   label=f"{label} ({int(flagged.sum())} cells)")
        grid_note = mask.meta.get("grid", grid_note)
    ax.set_xlabel("i")
    ax.set_ylabel("j")
    ax.set_aspect("equal")
    title = "troubled cells" + (f" ({grid_note})" if grid_note else "")
    ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    out = Path(out_png)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="plot troubled-cell masks")
    parser.add_argument("mask_csvs", nargs="+")
    parser.add_argument("-o", "--out", required=True, help="output PNG path")
    args = parser.parse_args(argv)
    plot_mask(args.mask_csvs, args.out)
    print(args.out)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
