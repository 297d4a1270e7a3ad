"""Fraction of dimension-1 columns resolved as apparent pairs.

Prints one row per input: the all-equal metric, the distinct-diameter
assignment and random point clouds, alongside the bound (n - 2) / n.

    python3 scripts/apparent_fraction.py --sizes 10 20 40 --seed 0
"""

import argparse
import math

import numpy as np

from ripsflow import DistanceInput, vr_barcode


def equal(n: int) -> DistanceInput:
    return DistanceInput(n=n, tri=np.ones(n * (n - 1) // 2))


def distinct(n: int) -> DistanceInput:
    N = n * (n - 1) // 2
    return DistanceInput(n=n, tri=(N - np.arange(N)).astype(float))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[10, 20, 40, 80])
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)

    print(f"{'input':>10} {'n':>5} {'edges':>7} {'apparent':>9} {'fraction':>9} {'(n-2)/n':>8}")
    for n in args.sizes:
        inputs = [("equal", equal(n)), ("distinct", distinct(n)),
                  ("cube", DistanceInput.from_points(rng.random((n, 3))))]
        for name, D in inputs:
            st = vr_barcode(D, 1, math.inf).stats[1]
            edges = n * (n - 1) // 2
            print(f"{name:>10} {n:>5} {edges:>7} {st.apparent:>9} "
                  f"{st.apparent / edges:>9.4f} {(n - 2) / n:>8.4f}")


if __name__ == "__main__":
    main()
