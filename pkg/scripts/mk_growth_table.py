#!/usr/bin/env python3
"""Certified variational lower bounds lambda(k) next to log k.

The diagnostic: lambda(k) should track log k up to an additive constant.
The constant is not effective, so this table is for plotting, not asserting.
"""

import argparse
import math
import sys

sys.path.insert(0, "src")

from apgaps.variational import mk_lower_bound, verify_certificate


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ks", default="2,5,10,20,50")
    ap.add_argument("--degree", type=int, default=3)
    ap.add_argument("--mc-samples", type=int, default=0, help="0 skips Monte-Carlo confirmation")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print("k,degree,basis_size,lambda,log_k,lambda_minus_log_k,mc_ratio,mc_sigma")
    for k in (int(v) for v in args.ks.split(",")):
        cert = mk_lower_bound(k, args.degree)
        mc_ratio = mc_sigma = ""
        if args.mc_samples:
            mc = verify_certificate(cert, args.mc_samples, seed=args.seed)
            mc_ratio, mc_sigma = repr(mc.ratio), repr(mc.sigma)
        lam = cert.lower_bound
        print(
            f"{k},{args.degree},{cert.basis_size},{lam!r},{math.log(k)!r},"
            f"{lam - math.log(k)!r},{mc_ratio},{mc_sigma}"
        )


if __name__ == "__main__":
    main()
