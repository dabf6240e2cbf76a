"""Regenerate the error tables for every domain into an output directory.

Usage: python3 scripts/reproduce_tables.py [outdir] [--trials N]
"""

import argparse
from pathlib import Path

from hybridhyper.experiments import PAPER_DEFAULTS, TABLE_COLUMNS, ExperimentConfig, run_experiment, write_outputs


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("outdir", nargs="?", default="results")
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    out = Path(args.outdir)
    for domain in PAPER_DEFAULTS:
        cfg = ExperimentConfig.for_domain(domain, trials=args.trials, seed=args.seed)
        rows = run_experiment(cfg)
        write_outputs(rows, TABLE_COLUMNS, cfg, str(out / f"table_{domain}.csv"), "table")
        print(f"{domain}: {len(rows)} rows")


if __name__ == "__main__":
    main()
