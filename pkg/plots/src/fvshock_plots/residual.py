"""Residual-norm convergence histories, one curve per run, log scale."""

from __future__ import annotations

import argparse
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .csvio import read_artifact, run_label


def plot_residual_history(history_csvs, out_png) -> Path:
    if not history_csvs:
        raise ValueError("need at least one history CSV")
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for path in history_csvs:
        hist = read_artifact(path, required=("iteration", "RN"))
        ax.semilogy(hist.column("iteration"), hist.column("RN"),
                    lw=1.1, label=run_label(hist.meta, Path(path).stem))
    ax.set_xlabel("iteration")
    ax.set_ylabel("RN")
    ax.set_title("residual convergence")
    ax.grid(True, which="both", alpha=0.25)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    out = Path(out_png)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="plot residual histories on a log scale")
    parser.add_argument("history_csvs", nargs="+")
    parser.add_argument("-o", "--out", required=True, help="output PNG path")
    args = parser.parse_args(argv)
    plot_residual_history(args.history_csvs, args.out)
    print(args.out)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
