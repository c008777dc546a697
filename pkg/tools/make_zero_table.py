#!/usr/bin/env python3
"""Regenerate the bundled table of nontrivial zeta zero ordinates.

Ordinates are computed with mpmath.zetazero at 25 significant digits and
written in the plain-ordinates format understood by zeta_eta.zeros.load_zeros
(one ordinate per line, '#' comments).  The table extends slightly past the
target height so that windowed queries near the top stay inside the table.

Usage:
    python3 tools/make_zero_table.py [--height 2100] [--out src/zeta_eta/data/zeros_t2100.txt]
"""

from __future__ import annotations

import argparse
import time

import mpmath as mp


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--height", type=float, default=2100.0,
                    help="generate ordinates up to at least this height")
    ap.add_argument("--margin", type=float, default=50.0,
                    help="extra height beyond --height")
    ap.add_argument("--dps", type=int, default=25, help="working precision in digits")
    ap.add_argument("--out", default="src/zeta_eta/data/zeros_t2100.txt")
    args = ap.parse_args()

    mp.mp.dps = args.dps
    target = args.height + args.margin
    lines = [
        "# Ordinates of nontrivial zeros of the Riemann zeta function.",
        "# One ordinate per line, increasing, 20 significant digits.",
        f"# Generated by tools/make_zero_table.py (mpmath {mp.__version__}, dps={args.dps}).",
        "# All listed zeros are simple and lie on the critical line.",
    ]
    n = 0
    t0 = time.time()
    while True:
        n += 1
        gamma = mp.zetazero(n).imag
        lines.append(mp.nstr(gamma, 20, strip_zeros=False))
        if gamma > target:
            break
        if n % 200 == 0:
            print(f"  n={n} gamma={mp.nstr(gamma, 10)} ({time.time() - t0:.0f}s)")
    with open(args.out, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"wrote {n} ordinates up to {mp.nstr(gamma, 12)} -> {args.out} "
          f"({time.time() - t0:.0f}s)")


if __name__ == "__main__":
    main()
