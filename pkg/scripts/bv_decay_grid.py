#!/usr/bin/env python3
"""Grid of worst-case error sums: does the normalized ratio shrink with x?

Prints one CSV row per (x, q) with the ratio E_b(x, q) * phi(q) / x; feed to
any plotter. The headline prediction is a log-power saving, so the ratio
should fall as x grows while q and b stay fixed.
"""

import argparse
import sys

sys.path.insert(0, "src")

from apgaps.bv_sums import compute_E_b
from apgaps.reports import ERROR_SUM_CSV_HEADER


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--xs", default="1e4,1e5,1e6", help="comma-separated x grid")
    ap.add_argument("--qs", default="3,4,5,12", help="comma-separated q grid")
    ap.add_argument("--b", type=float, default=0.2)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    print(ERROR_SUM_CSV_HEADER)
    for q in (int(v) for v in args.qs.split(",")):
        for x in (float(v) for v in args.xs.split(",")):
            rep = compute_E_b(x, q, args.b, threads=args.threads)
            print(rep.csv_row())


if __name__ == "__main__":
    main()
