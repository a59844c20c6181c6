"""Exact lower-tail exponent of a two-term weighted binomial sum against its limit I*."""
import argparse
import math

from hsbm.thresholds import TailSpec, generic_exponent, tail_oracle_exact


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--alpha", type=float, default=4.0)
    ap.add_argument("--beta", type=float, default=1.0)
    ap.add_argument("--h", type=float, default=5.0)
    ap.add_argument("--sizes", type=int, nargs="+", default=[100, 200, 400, 800, 1600, 3200])
    args = ap.parse_args()
    star = generic_exponent(TailSpec(((1, args.alpha, 0.5), (-1, args.beta, 0.5)))).value
    print(f"I* = {star:.6f}")
    print(f"{'n':>6} {'tail':>12} {'exponent':>10} {'rel.err':>8}")
    for n in args.sizes:
        N = int(round(0.5 * args.h * n))
        p, q = args.alpha * math.log(n) / n, args.beta * math.log(n) / n
        tail = tail_oracle_exact([(N, p, 1), (N, q, -1)], 0)
        est = -math.log(tail) / (args.h * math.log(n))
        print(f"{n:6d} {tail:12.4e} {est:10.6f} {abs(est - star) / star:8.3f}")


if __name__ == "__main__":
    main()
