"""Approximation errors of the Cesaro means for every builtin test function."""
import argparse

from biangle import experiments as ex


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--alpha", type=float, default=1.0)
    parser.add_argument("--beta", type=float, default=0.5)
    parser.add_argument("--delta", default="critical+0.1")
    parser.add_argument("--quad-m", type=int, default=60)
    args = parser.parse_args()
    ns = [4, 8, 16, 32]
    cfg = ex.ExperimentConfig(alpha=args.alpha, beta=args.beta, delta=args.delta, n_max=max(ns), quad_m=args.quad_m)
    print("function," + ",".join(f"sup_err_n{n}" for n in ns))
    for fid in ex.TEST_FUNCTIONS:
        rows = ex.approx_table(cfg, fid, ns=ns)
        print(fid + "," + ",".join(f"{r['sup_error_on_grid']:.4e}" for r in rows))


if __name__ == "__main__":
    main()
