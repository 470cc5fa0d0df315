#!/usr/bin/env python
"""log(tau_r) / -log(r) at r = 2^-k for the golden IET and random IETs."""
from __future__ import annotations

import argparse
from fractions import Fraction

from ietshrink.rauzy import perron_iet
from ietshrink.rng import SplitMix64, sample_random_iet
from ietshrink.targets import hitting_exponent, hitting_times


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--k-max", type=int, default=16)
    p.add_argument("--random", type=int, default=4, help="number of random 4-IETs")
    p.add_argument("--seed", type=int, default=1)
    args = p.parse_args()
    rng = SplitMix64(args.seed)
    cases = [("golden", perron_iet((2, 1), "ab"))]
    cases += [(f"random{i}", sample_random_iet(4, 2**40, rng)) for i in range(args.random)]
    ks = list(range(4, args.k_max + 1))
    radii = [Fraction(1, 2**k) for k in ks]
    print("iet,k,tau,exponent_lo,exponent_hi")
    for name, T in cases:
        for k, r, tau in zip(ks, radii, hitting_times(T, Fraction(0), Fraction(1, 2), radii, 10**8)):
            if tau is None or tau == 1:
                print(f"{name},{k},{tau},,")
                continue
            lo, hi = hitting_exponent(tau, r, 32)
            print(f"{name},{k},{tau},{float(lo):.6f},{float(hi):.6f}")


if __name__ == "__main__":
    main()
