#!/usr/bin/env python3
"""Plot the experiment CSVs written by `specshare experiment all`.

Usage: plot_figures.py RESULTS_DIR [--out-dir DIR]
"""

import argparse
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def load(results: Path, name: str) -> pd.DataFrame:
    return pd.read_csv(results / f"{name}.csv", comment="#")


def fig2(df, ax):
    for r, g in df.groupby("r_dir"):
        ax.plot(g.total_time, g.utility, label=f"R_dir={r:g}")
    ax.set_xlabel("total time T")
    ax.set_ylabel("PU utility")
    ax.legend()


def fig3(df, axes):
    for theta in sorted(df.theta_k.unique())[::6]:
        g = df[df.theta_k == theta]
        axes[0].plot(g.r_dir, g.optimal_value, label=f"theta_K={theta:g}")
        axes[1].plot(g.r_dir, g.total_time, label=f"theta_K={theta:g}")
    axes[0].plot(g.r_dir, g.baseline, "k:", label="direct only")
    axes[0].set_ylabel("optimal utility")
    axes[1].set_ylabel("optimal total time")
    for ax in axes:
        ax.set_xlabel("R_dir")
        ax.legend()


def heuristic(df, ax):
    for col in [c for c in df.columns if c.startswith("candidate_")] + ["exhaustive"]:
        ax.plot(df.r_dir, df[col], marker="o" if col == "exhaustive" else None, label=col)
    ax.set_xlabel("R_dir")
    ax.set_ylabel("expected PU utility")
    ax.legend()


def fig6(df, ax):
    ax.plot(df.n_2, df.strong_optimal, marker="o", label="strong information")
    ax.plot(df.n_2, df.complete, marker="s", label="complete information")
    ax.set_xlabel("number of high-type SUs")
    ax.set_ylabel("realized PU utility")
    ax.legend()


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("results", type=Path)
    parser.add_argument("--out-dir", type=Path, default=None)
    args = parser.parse_args()
    out = args.out_dir or args.results
    out.mkdir(parents=True, exist_ok=True)

    plots = {
        "fig2": lambda: fig2(load(args.results, "fig2"), plt.subplots()[1]),
        "fig3": lambda: fig3(load(args.results, "fig3"), plt.subplots(1, 2, figsize=(10, 4))[1]),
        "fig4": lambda: heuristic(load(args.results, "fig4"), plt.subplots()[1]),
        "fig5": lambda: heuristic(load(args.results, "fig5"), plt.subplots()[1]),
        "fig6": lambda: fig6(load(args.results, "fig6"), plt.subplots()[1]),
    }
    for name, draw in plots.items():
        if not (args.results / f"{name}.csv").exists():
            continue
        draw()
        plt.gcf().tight_layout()
        plt.savefig(out / f"{name}.png", dpi=120)
        plt.close("all")
        print(f"{name}.png")


if __name__ == "__main__":
    main()
