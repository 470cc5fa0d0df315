#!/usr/bin/env python
"""Growth of the orbit-ball union for a few rotations and radius sequences.

Badly approximable rotations (golden, silver) against one with a large
partial quotient, each with Harmonic and Power radii.
"""
from __future__ import annotations

import argparse
from fractions import Fraction

from ietshrink.numerics import sqrt
from ietshrink.rotations import from_quotients, rotation_iet
from ietshrink.targets import Harmonic, Power, limsup_profile


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--max-exp", type=int, default=4, help="largest checkpoint is 10**max_exp")
    args = p.parse_args()
    alphas = {
        "golden": (sqrt(5) - 1) / 2,
        "silver": sqrt(2) - 1,
        "liouville-ish": from_quotients([1, 2, 1, 200, 1, 1]),
    }
    seqs = {"harmonic(1/10)": Harmonic(Fraction(1, 10)), "power(1,2)": Power(Fraction(1), 2)}
    checkpoints = [(1, 10**e) for e in range(2, args.max_exp + 1)]
    print("alpha,sequence," + ",".join(f"M=1e{e}" for e in range(2, args.max_exp + 1)))
    for an, alpha in alphas.items():
        T = rotation_iet(alpha)
        for sn, seq in seqs.items():
            res = limsup_profile(T, 0, seq, checkpoints, grid=0)
            print(f"{an},{sn}," + ",".join(f"{float(m):.5f}" for m in res.measures))


if __name__ == "__main__":
    main()
