"""Tabulate D_q for Werner states over a grid of v and q (closed form),
with the numerical optimiser as a spot check on every fifth v.

    python3 scripts/werner_sweep.py --q 1,1.5,2,5,10,20 > werner_q.csv
"""

import argparse
import csv
import sys

import numpy as np

from qdiscord import BlochCorrelation, bell_diagonal_q_discord, q_discord, werner


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--q", default="1,1.5,2,3,5,10,20")
    ap.add_argument("--samples", type=int, default=21)
    args = ap.parse_args()
    qs = [float(x) for x in args.q.split(",")]
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["v"] + [f"D_{q:g}" for q in qs] + ["max_numeric_diff"])
    for k, v in enumerate(np.linspace(0, 1, args.samples)):
        c = BlochCorrelation(-v, -v, -v)
        vals = [bell_diagonal_q_discord(c, q)[0] for q in qs]
        diff = ""
        if k % 5 == 0:
            diff = max(abs(q_discord(werner(v), q, with_bound=False).value - x) for q, x in zip(qs, vals))
        out.writerow([f"{x:.17g}" for x in [v, *vals]] + ([f"{diff:.3e}"] if diff != "" else [""]))


if __name__ == "__main__":
    main()
