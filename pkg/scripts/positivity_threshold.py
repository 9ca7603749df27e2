"""Smallest order (on a grid of orders) for which the kernels stay nonnegative.

For each parameter pair the script bisects on delta until the minimum of
K_n^delta over n <= n_max and a Chebyshev grid is >= 0, and compares the
result with alpha + 2 beta + 3/2 and alpha + 2 beta + 7/2.
"""
import argparse

from biangle import BiangleParams, CesaroOrder, kernel_min

PAIRS = [(0.5, 0.0), (1.0, 0.5), (2.0, 1.0)]


def worst_min(p, delta, n_max, grid):
    return min(kernel_min(p, CesaroOrder(delta), n, grid_size=max(grid, 4 * n)) for n in range(1, n_max + 1))


def threshold(p, n_max, grid, lo, hi, steps=30):
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        if worst_min(p, mid, n_max, grid) >= 0:
            hi = mid
        else:
            lo = mid
    return hi


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n-max", type=int, default=20)
    parser.add_argument("--grid", type=int, default=120)
    args = parser.parse_args()
    print("alpha,beta,empirical_threshold,alpha+2beta+3/2,alpha+2beta+7/2")
    for a, b in PAIRS:
        p = BiangleParams(a, b)
        t = threshold(p, args.n_max, args.grid, 0.0, a + 2 * b + 5.0)
        print(f"{a},{b},{t:.4f},{a + 2 * b + 1.5},{a + 2 * b + 3.5}")


if __name__ == "__main__":
    main()
