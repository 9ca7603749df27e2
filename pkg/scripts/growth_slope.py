"""Log-log slope of the growth integral on a dyadic ladder.

Prints the table and the local slopes, which show how far the ladder is
from its asymptotic regime:

    python scripts/growth_slope.py --n-max 256
"""
import argparse

from biangle import experiments as ex
from biangle.cli import write_csv


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--alpha", type=float, default=1.0)
    parser.add_argument("--beta", type=float, default=0.5)
    parser.add_argument("--delta", default="3")
    parser.add_argument("--n-max", type=int, default=128)
    parser.add_argument("--out", default=None)
    args = parser.parse_args()
    cfg = ex.ExperimentConfig(alpha=args.alpha, beta=args.beta, delta=args.delta, n_max=args.n_max)
    rows = ex.growth_table(cfg)
    write_csv(rows, ex.GROWTH_COLUMNS, args.out)
    tail = ex.loglog_slope([r["n"] for r in rows[-3:]], [r["integral"] for r in rows[-3:]])
    print(
        f"fitted slope {rows[0]['fitted_slope']:.4f}, last-three slope {tail:.4f}, "
        f"bound exponent {rows[0]['bound_exponent']:.4f}"
    )


if __name__ == "__main__":
    main()
