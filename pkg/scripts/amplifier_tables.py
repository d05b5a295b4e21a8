#!/usr/bin/env python3
"""Tabulate the solved amplifier coefficients across a prime ladder.

Prints one CSV row per prime with the exact rational coefficients, the
identity verdict (re-verified through operator multiplication for small
primes), and the detector threshold 1/(|partitions| * max |y|).
"""

import argparse
import sys

from heckelab.amplifier import amplifier_coefficients
from heckelab.partitions import weight_partitions


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=4)
    ap.add_argument("--primes", default="2,3,5,101,1009")
    ap.add_argument("--verify-below", type=int, default=200,
                    help="re-verify the operator identity for primes below this")
    args = ap.parse_args()

    parts = sorted(weight_partitions(args.n), reverse=True)
    header = ["p"] + ["y" + "".join(map(str, a)) for a in parts] + ["max_abs_y", "threshold", "identity"]
    print(",".join(header))
    ok = True
    for p in (int(v) for v in args.primes.split(",")):
        system = amplifier_coefficients(args.n, p, verify=p < args.verify_below)
        ok = ok and system.identity_ok
        row = [str(p)] + [str(system.y[a]) for a in parts]
        row += [str(system.max_abs_y), str(system.threshold),
                "PASS" if system.identity_ok else "FAIL"]
        print(",".join(row))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
