#!/usr/bin/env python3
"""Tabulate the u2 = u3 crossing surface over the (alpha^2, r) plane.

Thin wrapper over `bellopt surface`; the output CSV has one row per grid
point with the (up to two) |q|^2 roots where the optimal-settings region
flips.  Plotting the roots over (alpha^2, r) reproduces the closed surface
that separates the two settings regimes.
"""

import argparse

from bellopt.cli import main as cli_main


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--grid", default="50,50", metavar="NA,NR")
    ap.add_argument("--output", default=None)
    args = ap.parse_args()
    argv = ["surface", "--grid", args.grid]
    if args.output:
        argv += ["--output", args.output]
    return cli_main(argv)


if __name__ == "__main__":
    raise SystemExit(main())
