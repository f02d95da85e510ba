#!/usr/bin/env python3
"""Plot sweep CSVs produced by `zzmit sweep` as infidelity-vs-ratio curves.

Usage:  python scripts/plot_sweeps.py results/isolated_x90_uncapped [-o fig.png]

Every CSV in the directory becomes one labeled curve on a log-scale axis.
"""

import argparse
import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def load(path: Path):
    with open(path) as fh:
        rows = list(csv.DictReader(fh))
    ratios = [float(r["eta_ratio"]) for r in rows]
    infid = [max(float(r["infidelity"]), 1e-16) for r in rows]
    return ratios, infid


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("results_dir", type=Path)
    ap.add_argument("-o", "--out", type=Path, default=None)
    args = ap.parse_args()

    files = sorted(args.results_dir.glob("*.csv"))
    if not files:
        raise SystemExit(f"no CSVs under {args.results_dir}")
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    for f in files:
        ratios, infid = load(f)
        style = "--" if "-dy" in f.stem else "-"
        ax.plot(ratios, infid, style, marker=".", label=f.stem)
    ax.set_yscale("log")
    ax.set_xlabel("crosstalk ratio")
    ax.set_ylabel("gate infidelity")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=7)
    fig.tight_layout()
    out = args.out or args.results_dir / "sweeps.png"
    fig.savefig(out, dpi=160)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
