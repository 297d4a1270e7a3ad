"""Wall-clock scaling of the barcode engine on random points in the unit cube.

Also checks that the output is identical for every worker count.

    python3 scripts/scaling_smoke.py --sizes 250 500 1000 --dim 1 --workers 1 8
"""

import argparse
import time

import numpy as np

from ripsflow import DistanceInput, vr_barcode


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[250, 500, 1000])
    ap.add_argument("--dim", type=int, default=1)
    ap.add_argument("--workers", type=int, nargs="+", default=[1, 8])
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    vr_barcode(DistanceInput.from_points(rng.random((30, 3))), args.dim)  # compile kernels

    print(f"{'n':>6} {'workers':>7} {'seconds':>8} {'columns':>9} {'apparent':>9} "
          f"{'reduced':>8} {'same':>5}")
    for n in args.sizes:
        D = DistanceInput.from_points(rng.random((n, 3)))
        ref = None
        for w in args.workers:
            t0 = time.perf_counter()
            res = vr_barcode(D, args.dim, workers=w)
            dt = time.perf_counter() - t0
            if ref is None:
                ref = res
            same = all(np.array_equal(a, b) for a, b in zip(ref.pairs, res.pairs))
            st = res.stats[args.dim]
            print(f"{n:>6} {w:>7} {dt:>8.3f} {st.columns:>9} {st.apparent:>9} "
                  f"{st.reduced:>8} {str(same):>5}")


if __name__ == "__main__":
    main()
