"""Compare the two Bell-diagonal upper-bound expressions with the numerically
minimised bound on random correlation vectors, printing CSV.

    python3 scripts/bound_report.py --states 20 --seed 1
"""

import argparse
import csv
import sys

import numpy as np

from qdiscord import SearchConfig, bell_diagonal, bell_diagonal_q_discord, bell_diagonal_upper_bound_axes, q_discord
from qdiscord.states import random_bloch_correlation


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--states", type=int, default=20)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--q", default="0.5,1,1.5,2,3")
    args = ap.parse_args()
    qs = [float(x) for x in args.q.split(",")]
    rng = np.random.default_rng(args.seed)
    cfg = SearchConfig(grid_resolution=32, seed_count=4)
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["c1", "c2", "c3", "q", "D_q", "bound_numeric", "bound_printed", "bound_axes"])
    for _ in range(args.states):
        c = random_bloch_correlation(rng)
        rho = bell_diagonal(c)
        for q in qs:
            res = q_discord(rho, q, cfg)
            printed = bell_diagonal_q_discord(c, q)[1]
            out.writerow([f"{x:.17g}" for x in (*c.as_array(), q, res.value, res.upper_bound,
                                                printed, bell_diagonal_upper_bound_axes(c, q))])


if __name__ == "__main__":
    main()
