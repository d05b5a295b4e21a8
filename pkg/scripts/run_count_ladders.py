#!/usr/bin/env python3
"""Run the counting ladders and print CSV rows for plotting.

Covers the quadratic-with-linear-conditions ladders over X and the
similitude-matrix ladder over primes; slopes are compared against their
benchmarks (n - k - 2 for the former, 3 for the latter at rank 4).
"""

import argparse
import sys

from heckelab.diophantine import (
    QuadraticForm,
    corollary_count_ladder,
    scaling_experiment,
)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=20)
    ap.add_argument("--xs", default="10,20,30,40")
    ap.add_argument("--primes", default="2,3,5,7")
    ap.add_argument("--nu", type=int, default=1)
    args = ap.parse_args()

    xs = [int(v) for v in args.xs.split(",")]
    print("kind,n,k,slope,benchmark,counts")
    ok = True
    for n, k in ((3, 0), (3, 1), (4, 0), (4, 1), (4, 2)):
        rep = corollary_count_ladder(n, k, xs, seed=args.seed)
        counts = ";".join(str(r["count"]) for r in rep.notes["ladder"])
        bench = n - k - 2
        print(f"quadratic,{n},{k},{rep.exponent_fit:.3f},{bench},{counts}")
        ok = ok and rep.exponent_fit <= bench + 0.3

    primes = [int(v) for v in args.primes.split(",")]
    rep = scaling_experiment(QuadraticForm.identity(4), args.nu, primes)
    counts = ";".join(str(r["count"]) for r in rep.notes["ladder"])
    slope = "nan" if rep.exponent_fit is None else f"{rep.exponent_fit:.3f}"
    print(f"similitude,4,,{slope},3,{counts}")
    ok = ok and rep.exponent_fit is not None and rep.exponent_fit < 3
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
