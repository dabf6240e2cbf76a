"""Regenerate the lambda-sweep series (error, sparsity and J against s).

Usage: python3 scripts/sweep_figures.py [outdir] [--trials N] [--plot]
The plot option needs matplotlib, which is not a package dependency.
"""

import argparse
import csv
from pathlib import Path

from hybridhyper.experiments import PAPER_DEFAULTS, SWEEP_COLUMNS, ExperimentConfig, sweep_lambda, write_outputs


def plot(path):
    import matplotlib.pyplot as plt

    rows = list(csv.DictReader(open(path)))
    fig, axes = plt.subplots(1, 3, figsize=(12, 3.5))
    for v in sorted({r["variant"] for r in rows}):
        sub = [r for r in rows if r["variant"] == v]
        s = [int(r["s"]) for r in sub]
        for ax, key in zip(axes, ("mean_error", "mean_sparsity", "J")):
            ax.plot(s, [float(r[key]) for r in sub], label=v)
            ax.set_xlabel("s")
            ax.set_title(key)
    axes[0].legend()
    fig.tight_layout()
    fig.savefig(path.with_suffix(".png"), dpi=120)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("outdir", nargs="?", default="results")
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--plot", action="store_true")
    args = ap.parse_args()
    out = Path(args.outdir)
    for domain in PAPER_DEFAULTS:
        cfg = ExperimentConfig.for_domain(domain, trials=args.trials, seed=args.seed)
        path = out / f"sweep_{domain}.csv"
        write_outputs(sweep_lambda(cfg), SWEEP_COLUMNS, cfg, str(path), "sweep")
        print(f"{domain}: {path}")
        if args.plot:
            plot(path)


if __name__ == "__main__":
    main()
