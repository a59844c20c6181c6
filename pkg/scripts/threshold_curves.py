"""Tabulate I, I2 and Isdp along beta and print the alpha of each level-1 crossing."""
import argparse

import numpy as np

from hsbm.thresholds import contour


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--k", type=int, default=6)
    ap.add_argument("--beta-max", type=float, default=10.0)
    ap.add_argument("--rows", type=int, default=11)
    args = ap.parse_args()
    curves = {fn: contour(fn, 1.0, (0.0, 1000.0), (0.0, args.beta_max), args.rows, args.k)
              for fn in ("I", "I2", "Isdp")}
    print(f"k={args.k}: alpha where each threshold reaches 1")
    print(f"{'beta':>6} {'I':>9} {'I2':>9} {'Isdp':>9}")
    for i, beta in enumerate(np.linspace(0.0, args.beta_max, args.rows)):
        vals = [dict((b, a) for a, b in curves[fn].points).get(float(beta)) for fn in curves]
        print(f"{beta:6.2f} " + " ".join(f"{v:9.3f}" if v is not None else f"{'-':>9}" for v in vals))


if __name__ == "__main__":
    main()
