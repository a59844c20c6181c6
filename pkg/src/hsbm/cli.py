"""Command-line entry point: ``hsbm {sample,estimate,certify,thresholds,contour,phase}``.

Exit status is 0 on success, 1 on a usage error, 2 on a runtime error.
"""
from __future__ import annotations

import argparse
import csv
import io
import logging
import sys

from . import io as hio
from .certificate import certify
from .core import ModelParams, sample_hypergraph, sample_partition
from .errors import HSBMError
from .estimators import ml_bruteforce, spectral_bisection, trunc_bruteforce, trunc_local_search
from .experiment import (cells_to_csv, cells_to_json, config_from_mapping,
                         parse_config_text, phase_diagram)
from .graph_ops import hamming_error, weighted_projection
from .thresholds import contour, threshold_values

EXIT_USAGE = 1
EXIT_RUNTIME = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _nonneg_float(text):
    v = float(text)
    if not v >= 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return v


def _write_text(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _fmt(v: float) -> str:
    return f"{v:.12g}"


# ---------------------------------------------------------------------------
# subcommands


def cmd_sample(args) -> None:
    if args.p is not None or args.q is not None:
        if args.p is None or args.q is None:
            raise UsageError("--p and --q must be given together")
        params = ModelParams.from_probabilities(args.n, args.k, args.p, args.q)
    else:
        if args.alpha is None or args.beta is None:
            raise UsageError("--alpha and --beta are required (or --p and --q)")
        params = ModelParams(args.n, args.k, args.alpha, args.beta)
    sigma = sample_partition(args.n, args.seed)
    H = sample_hypergraph(params, sigma, args.seed)
    _write_text(hio.format_hypergraph(H), args.out)
    if args.partition_out:
        hio.write_partition(sigma, args.partition_out)


def cmd_estimate(args) -> None:
    H = hio.read_hypergraph(args.hypergraph)
    sigma = hio.read_partition(args.partition) if args.partition else None
    if args.method == "ml":
        res = ml_bruteforce(H, assortative=not args.disassortative)
        cands, objective = res.candidates, res.objective
    elif args.method == "trunc":
        res = trunc_bruteforce(weighted_projection(H))
        cands, objective = res.candidates, res.objective
    elif args.method == "trunc-local":
        res = trunc_local_search(weighted_projection(H), args.restarts, args.seed)
        cands, objective = res.candidates, res.objective
    else:
        cands, objective = {spectral_bisection(weighted_projection(H))}, None
    print(f"method={args.method}")
    if objective is not None:
        print(f"objective={objective}")
    print(f"candidates={len(cands)}")
    for x in sorted(cands, key=lambda c: c.as_tuple()):
        line = repr(x)
        if sigma is not None:
            line += f" hamming={hamming_error(x, sigma)}"
        print(line)


def cmd_certify(args) -> None:
    H = hio.read_hypergraph(args.hypergraph)
    sigma = hio.read_partition(args.partition)
    rep = certify(H, sigma, args.tol)
    for key, value in rep.as_record().items():
        print(f"{key}={value if isinstance(value, bool) else _fmt(value)}")


def cmd_thresholds(args) -> None:
    vals = threshold_values(args.alpha, args.beta, args.k)
    for key in ("I", "I2", "Isdp"):
        print(f"{key}={_fmt(vals[key])}")


def cmd_contour(args) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("fn", "level", "beta", "alpha"))
    for fn in args.fn:
        c = contour(fn, args.level, (args.alpha_min, args.alpha_max),
                    (args.beta_min, args.beta_max), args.steps, args.k)
        for alpha, beta in c.points:
            writer.writerow((fn, repr(c.level), repr(beta), repr(alpha)))
        for beta in c.missing:
            logging.getLogger(__name__).info("%s=%s not reached at beta=%s", fn, args.level, beta)
    _write_text(buf.getvalue(), args.out)


_PHASE_FLAGS = ("n", "k", "alpha_min", "alpha_max", "beta_min", "beta_max", "steps",
                "alpha_steps", "beta_steps", "trials", "seed", "method", "tol",
                "restarts", "out", "format", "workers")


def cmd_phase(args) -> None:
    values = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            values.update(parse_config_text(fh.read()))
    values.update({k: getattr(args, k) for k in _PHASE_FLAGS if getattr(args, k) is not None})
    try:
        config = config_from_mapping(values)
    except HSBMError as exc:
        raise UsageError(str(exc)) from exc
    cells = phase_diagram(config)
    text = cells_to_csv(cells) if config.fmt == "csv" else cells_to_json(cells)
    _write_text(text, config.out)


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hsbm", description="Two-community hypergraph SBM toolkit.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("sample", help="sample a planted partition and hypergraph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--alpha", type=_nonneg_float)
    p.add_argument("--beta", type=_nonneg_float)
    p.add_argument("--p", type=float)
    p.add_argument("--q", type=float)
    p.add_argument("--out", help="hypergraph file (default: stdout)")
    p.add_argument("--partition-out", help="write the planted partition here")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("estimate", help="recover the partition from a hypergraph file")
    p.add_argument("--hypergraph", required=True)
    p.add_argument("--partition", help="planted partition, for the hamming error")
    p.add_argument("--method", choices=("ml", "trunc", "trunc-local", "spectral"), default="spectral")
    p.add_argument("--restarts", type=_positive_int, default=8)
    p.add_argument("--disassortative", action="store_true", help="ml with p < q")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("certify", help="check the dual certificate for a planted partition")
    p.add_argument("--hypergraph", required=True)
    p.add_argument("--partition", required=True)
    p.add_argument("--tol", type=float)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("thresholds", help="print I, I2, Isdp at one point")
    p.add_argument("--alpha", type=_nonneg_float, required=True)
    p.add_argument("--beta", type=_nonneg_float, required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_thresholds)

    p = sub.add_parser("contour", help="trace level curves of the thresholds as CSV")
    p.add_argument("--fn", choices=("I", "I2", "Isdp"), action="append", required=True)
    p.add_argument("--level", type=float, default=1.0)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--alpha-min", type=_nonneg_float, default=0.0)
    p.add_argument("--alpha-max", type=_nonneg_float, default=180.0)
    p.add_argument("--beta-min", type=_nonneg_float, default=0.0)
    p.add_argument("--beta-max", type=_nonneg_float, default=10.0)
    p.add_argument("--steps", type=_positive_int, default=50)
    p.add_argument("--out")
    p.set_defaults(func=cmd_contour)

    p = sub.add_parser("phase", help="run a phase-diagram sweep")
    p.add_argument("--config", help="flat key=value file; flags override it")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--alpha-min", type=_nonneg_float)
    p.add_argument("--alpha-max", type=_nonneg_float)
    p.add_argument("--beta-min", type=_nonneg_float)
    p.add_argument("--beta-max", type=_nonneg_float)
    p.add_argument("--steps", type=_positive_int)
    p.add_argument("--alpha-steps", type=_positive_int)
    p.add_argument("--beta-steps", type=_positive_int)
    p.add_argument("--trials", type=_positive_int)
    p.add_argument("--method", choices=("certificate", "spectral", "ml", "trunc", "trunc-local"))
    p.add_argument("--tol", type=float)
    p.add_argument("--restarts", type=_positive_int)
    p.add_argument("--workers", type=_positive_int)
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--out")
    p.set_defaults(func=cmd_phase)

    for name, sp in sub.choices.items():
        sp.add_argument("--seed", type=int, default=0 if name != "phase" else None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        args.func(args)
    except UsageError as exc:
        print(f"hsbm {args.command}: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (HSBMError, OSError) as exc:
        print(f"hsbm {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return 0


if __name__ == "__main__":
    sys.exit(main())
