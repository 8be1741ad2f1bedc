"""Energy floor against map size.

The longest cycle of a random map on N states grows like sqrt(N), so the
smallest quantum E = h/(P dt) shrinks like h/sqrt(N). The script measures
the per-map floor over a range of sizes and fits the log-log slope, which
should sit near -1/2.
"""

import argparse
import math

import numpy as np

from ontoq.census import run_census


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--min-exp", type=int, default=10, help="smallest size 2^k")
    ap.add_argument("--max-exp", type=int, default=16, help="largest size 2^k")
    ap.add_argument("--maps", type=int, default=150, help="maps per size")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=None)
    args = ap.parse_args()

    sizes, means, errs = [], [], []
    print(f"{'N':>8} {'mean E_min':>12} {'std err':>10} {'h/sqrt(2N)':>12} {'ratio':>7}")
    for k in range(args.min_exp, args.max_exp + 1):
        n = 1 << k
        c = run_census(n, args.maps, mode="full", master_seed=args.seed + k,
                       workers=args.workers)
        floors = np.array([1.0 / max(d) for d in c.per_map])
        mean = floors.mean()
        se = floors.std(ddof=1) / math.sqrt(args.maps)
        ref = 1.0 / math.sqrt(2.0 * n)
        print(f"{n:>8} {mean:>12.5g} {se:>10.2g} {ref:>12.5g} {mean / ref:>7.3f}")
        sizes.append(n)
        means.append(mean)
        errs.append(se)

    slope = np.polyfit(np.log(sizes), np.log(means), 1)[0]
    print(f"\nlog-log slope: {slope:.4f}  (sqrt scaling predicts -0.5)")


if __name__ == "__main__":
    main()
