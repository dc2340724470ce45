#!/usr/bin/env python3
"""Run the 30-architecture consistency sweep on each bundled dataset.

Writes results/ann_sweep_<dataset>.csv and prints each dataset's three best
configurations by average MSE.

Usage: python scripts/run_ann_sweeps.py [--seed N] [--runs N] [--out-dir results]
"""

import argparse
import csv
import pathlib
import sys

from fodamp.cli import main as fodamp_main


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--runs", type=int, default=25)
    ap.add_argument("--out-dir", default="results")
    args = ap.parse_args()

    out_dir = pathlib.Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for dataset in ("pseudo", "meta1", "meta2"):
        out = out_dir / f"ann_sweep_{dataset}.csv"
        code = fodamp_main([
            "ann-sweep", "--dataset", dataset, "--runs", str(args.runs),
            "--seed", str(args.seed), "--out", str(out),
        ])
        if code != 0:
            return code
        with open(out) as fh:
            rows = sorted(csv.DictReader(fh), key=lambda r: float(r["avg_mse"]))
        top = ", ".join(
            f"{r['layers']}x{r['neurons']}/{r['act1']}"
            + (f"/{r['act2']}" if r["act2"] else "")
            + f"={float(r['avg_mse']):.2e}"
            for r in rows[:3]
        )
        print(f"{dataset}: top-3 by avg MSE: {top}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
