"""Full k=6, n=500 certificate sweep, written as CSV next to the threshold contours.

    python3 scripts/phase_diagram.py --out results/        # ~15 min on one core
    HSBM_THREADS=8 python3 scripts/phase_diagram.py --steps 10 --trials 10
"""
import argparse
import csv
import os
import time

from hsbm.experiment import ExperimentConfig, cells_to_csv, phase_diagram
from hsbm.thresholds import contour


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=500)
    ap.add_argument("--k", type=int, default=6)
    ap.add_argument("--alpha-max", type=float, default=180.0)
    ap.add_argument("--beta-max", type=float, default=10.0)
    ap.add_argument("--steps", type=int, default=20)
    ap.add_argument("--trials", type=int, default=30)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--method", default="certificate")
    ap.add_argument("--out", default="results")
    args = ap.parse_args()

    os.makedirs(args.out, exist_ok=True)
    config = ExperimentConfig(n=args.n, k=args.k, alpha_range=(0.0, args.alpha_max),
                              beta_range=(0.0, args.beta_max), alpha_steps=args.steps,
                              beta_steps=args.steps, trials=args.trials,
                              base_seed=args.seed, method=args.method)
    t0 = time.time()
    cells = phase_diagram(config)
    with open(os.path.join(args.out, "phase.csv"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(cells_to_csv(cells))

    with open(os.path.join(args.out, "contours.csv"), "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("fn", "level", "beta", "alpha"))
        for fn in ("I", "I2", "Isdp"):
            c = contour(fn, 1.0, (0.0, args.alpha_max), (0.0, args.beta_max), 41, args.k)
            for a, b in c.points:
                w.writerow((fn, 1.0, repr(b), repr(a)))

    print(f"{len(cells)} cells in {time.time() - t0:.0f}s")
    # crude text rendering: rows are alpha (top = largest), columns beta
    betas = sorted({c.beta for c in cells})
    for a in sorted({c.alpha for c in cells}, reverse=True):
        row = [c for c in cells if c.alpha == a]
        shades = "".join(" .:-=+*#%@"[min(9, int(c.success_rate * 10))] for c in row)
        print(f"{a:7.1f} |{shades}|")
    print(f"{'':7s}  beta 0 .. {betas[-1]:g}")


if __name__ == "__main__":
    main()
