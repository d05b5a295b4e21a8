#!/usr/bin/env python3
"""Search for rank-4 similitude matrices with prescribed divisor structure.

The flagship instance (m, l) = (16, 2) with the identity form recovers the
384 sign matrices with orthogonal columns and determinant +16; other (p^4, p)
pairs exhibit the quaternion-flavoured families counted by the scaling
ladder.  Writes the witness report as JSON.
"""

import argparse
import sys

from fractions import Fraction

from heckelab.diophantine import QuadraticForm, enumerate_S_delta


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=2)
    ap.add_argument("--nu", type=int, default=1)
    ap.add_argument("--delta", default="1e-6")
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    q = QuadraticForm.identity(4)
    m, l = args.p ** (4 * args.nu), args.p ** args.nu
    rep = enumerate_S_delta(q, m, l, Fraction(args.delta))
    text = rep.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    sign_mats = sum(
        1 for w in rep.witnesses if all(abs(x) == args.nu for row in w for x in row)
    )
    sys.stderr.write(
        f"(m,l)=({m},{l}): {rep.count} witnesses, {sign_mats} sign matrices, "
        f"complete={rep.complete}\n"
    )
    return 0 if rep.complete else 3


if __name__ == "__main__":
    sys.exit(main())
