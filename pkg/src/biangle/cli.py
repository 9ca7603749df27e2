"""Command-line entry point: ``biangle kernel-table|approx|verify|growth-slope``.

Exit codes: 0 success, 2 configuration error, 3 numerical failure (including
a verification report with a field over threshold).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import experiments as ex
from .quadrature import QuadratureError, biangle_rule, dump_rule_csv

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


def fmt(value):
    if isinstance(value, float):
        return "nan" if math.isnan(value) else format(value, ".17g")
    return str(value)


def write_csv(rows, columns, out):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(row[c]) for c in columns])
    _emit(buf.getvalue(), out)


def _emit(text, out):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def _common(sub, n_max_default, delta_default="critical+0.1", quad_default=200):
    sub.add_argument("--alpha", type=float, default=1.0)
    sub.add_argument("--beta", type=float, default=0.5)
    sub.add_argument(
        "--delta", default=delta_default,
        help="number, 'critical+EPS' (alpha+beta+1+EPS) or 'positivity' (alpha+2beta+3/2)",
    )
    sub.add_argument("--n-max", type=int, default=n_max_default)
    sub.add_argument("--quad-m", type=int, default=quad_default)
    sub.add_argument("--grid", type=int, default=None, dest="grid_size")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--out", default=None)


def build_parser():
    parser = argparse.ArgumentParser(prog="biangle", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="command", required=True)

    kt = subs.add_parser("kernel-table", help="L1 norms, minima and closed-form residuals of K_n^delta")
    _common(kt, 20)
    kt.add_argument("--l1-tol", type=float, default=1e-3,
                    help="relative tolerance between the m and 2m L1 values")
    kt.add_argument("--dump-rule", default=None, help="write the biangle rule to this CSV")

    ap = subs.add_parser("approx", help="errors of S_n^delta f for a builtin f")
    _common(ap, 32, quad_default=60)
    ap.add_argument("--function", default="smooth_exp", dest="function_id")

    ve = subs.add_parser("verify", help="certify the closed form, addition and product formulas")
    _common(ve, 20, quad_default=24)
    ve.add_argument("--mu-m", type=int, default=24)

    gs = subs.add_parser("growth-slope", help="log-log slope of the kernel growth integral")
    _common(gs, 128, delta_default="3")
    return parser


def _config(args):
    fields = dict(
        alpha=args.alpha, beta=args.beta, delta=args.delta, n_max=args.n_max,
        quad_m=args.quad_m, grid_size=args.grid_size, seed=args.seed, out=args.out,
    )
    if getattr(args, "mu_m", None) is not None:
        fields["mu_m"] = args.mu_m
    if getattr(args, "l1_tol", None) is not None:
        fields["l1_tol"] = args.l1_tol
    return ex.ExperimentConfig(**fields)


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
        if args.command == "kernel-table":
            if cfg.grid_size < 4 * cfg.n_max:
                raise ex.ConfigError("grid must be at least 4 * n_max for positivity scans")
            if args.dump_rule:
                dump_rule_csv(biangle_rule(cfg.params, cfg.quad_m), args.dump_rule)
            write_csv(ex.kernel_table(cfg), ex.KERNEL_TABLE_COLUMNS, cfg.out)
        elif args.command == "approx":
            write_csv(ex.approx_table(cfg, args.function_id), ex.APPROX_COLUMNS, cfg.out)
        elif args.command == "verify":
            report = ex.verify_report(cfg)
            _emit(json.dumps(report, indent=2, sort_keys=True) + "\n", cfg.out)
            if not report["passed"]:
                print("verification failed: " + ", ".join(report["failing"]), file=sys.stderr)
                return EXIT_NUMERIC
        elif args.command == "growth-slope":
            rows = ex.growth_table(cfg)
            write_csv(rows, ex.GROWTH_COLUMNS, cfg.out)
            print(
                f"fitted slope {rows[0]['fitted_slope']:.4f}, "
                f"bound exponent {rows[0]['bound_exponent']:.4f}",
                file=sys.stderr,
            )
    except ex.ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ex.NumericalFailure, QuadratureError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
