"""L1 norms and minima of the Cesaro kernels over a range of orders.

Writes one CSV per order keyword to the output directory, e.g.

    python scripts/kernel_sweep.py --alpha 1 --beta 0.5 --n-max 40 --outdir runs/
"""
import argparse
from pathlib import Path

from biangle import experiments as ex
from biangle.cli import write_csv

ORDERS = ["0.5", "critical+0.1", "positivity"]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--alpha", type=float, default=1.0)
    parser.add_argument("--beta", type=float, default=0.5)
    parser.add_argument("--n-max", type=int, default=40)
    parser.add_argument("--quad-m", type=int, default=200)
    parser.add_argument("--outdir", type=Path, default=Path("runs"))
    args = parser.parse_args()
    args.outdir.mkdir(parents=True, exist_ok=True)
    for order in ORDERS:
        cfg = ex.ExperimentConfig(
            alpha=args.alpha, beta=args.beta, delta=order, n_max=args.n_max, quad_m=args.quad_m
        )
        rows = ex.kernel_table(cfg)
        path = args.outdir / f"kernel_{order.replace('+', '_')}.csv"
        write_csv(rows, ex.KERNEL_TABLE_COLUMNS, str(path))
        worst = min(r["min_kernel"] for r in rows)
        top = max(r["l1_norm"] for r in rows)
        print(f"delta={cfg.resolved_delta:.4f}: max L1 {top:.6f}, min kernel {worst:.4g} -> {path}")


if __name__ == "__main__":
    main()
