"""Empirical relative error of the approximate W1 against the exact value.

For each separation ``s`` the script draws random diagram pairs, solves both
problems and reports the mean and largest relative error next to the
theoretical bound.

    python3 scripts/w1_error_vs_s.py --pairs 50 --points 40 --s 12 20 40 93
"""

import argparse
import time

import numpy as np

from ripsflow.wasserstein import approx_w1_report, exact_w1_report, theoretical_error_bound


def random_diagram(rng: np.random.Generator, k: int) -> np.ndarray:
    b = rng.random(k)
    return np.column_stack([b, b + rng.exponential(0.5, k) + 1e-3])


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--s", type=float, nargs="+", default=[12, 20, 40, 93])
    ap.add_argument("--pairs", type=int, default=50)
    ap.add_argument("--points", type=int, default=40, help="largest diagram size")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    cases = [(random_diagram(rng, int(rng.integers(1, args.points + 1))),
              random_diagram(rng, int(rng.integers(1, args.points + 1))))
             for _ in range(args.pairs)]
    exact = [exact_w1_report(a, b) for a, b in cases]

    print(f"{'s':>6} {'bound':>7} {'mean err':>9} {'max err':>8} {'arcs':>7} {'exact arcs':>10} "
          f"{'time s':>7}")
    for s in args.s:
        t0 = time.perf_counter()
        reps = [approx_w1_report(a, b, s) for a, b in cases]
        dt = time.perf_counter() - t0
        err = np.array([abs(r.value - e.value) / e.value for r, e in zip(reps, exact)])
        print(f"{s:>6g} {theoretical_error_bound(s):>7.3f} {err.mean():>9.5f} {err.max():>8.5f} "
              f"{np.mean([r.arcs for r in reps]):>7.0f} {np.mean([e.arcs for e in exact]):>10.0f} "
              f"{dt:>7.2f}")


if __name__ == "__main__":
    main()
