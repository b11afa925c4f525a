"""Plot q-discord curves against D_1 from ``qdiscord fig1`` CSV output.

    qdiscord fig1 --family werner -o werner.csv
    qdiscord fig1 --family uv --u 1/3 -o uv.csv
    python3 scripts/plot_fig1.py werner.csv uv.csv -o fig1.png
"""

import argparse
import csv

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def read(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, data = rows[0], [[float(x) for x in r] for r in rows[1:]]
    cols = {h: [r[i] for r in data] for i, h in enumerate(header)}
    return header, cols


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("csv", nargs="+")
    ap.add_argument("-o", "--output", default="fig1.png")
    args = ap.parse_args()

    fig, axes = plt.subplots(1, len(args.csv), figsize=(5 * len(args.csv), 4), squeeze=False)
    for ax, path in zip(axes[0], args.csv):
        header, cols = read(path)
        qcols = [h for h in header if h.startswith("Dq_")]
        cmap = plt.get_cmap("viridis", len(qcols))
        for k, h in enumerate(qcols):
            ax.plot(cols["D_1"], cols[h], color=cmap(k), lw=1, label=h.replace("Dq_", "q=") if k % 4 == 0 else None)
        ax.set_xlabel(r"$D_1 = \beta\,\Delta W$")
        ax.set_ylabel(r"$D_q$")
        ax.set_title(path)
        ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(args.output, dpi=150)
    print(f"wrote {args.output}")


if __name__ == "__main__":
    main()
