#!/usr/bin/env python
"""Slack of the two separation lemmas on random instances.

Reports how often the right-hand side is positive (a non-vacuous check)
and the smallest ratio lhs / rhs among those.
"""
from __future__ import annotations

import argparse

from ietshrink.experiments import random_separated2_instance, random_separated_instance
from ietshrink.rng import SplitMix64
from ietshrink.targets import check_separated_bound, check_separated_bound_inverse


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--count", type=int, default=500)
    p.add_argument("--seed", type=int, default=5)
    args = p.parse_args()
    rng = SplitMix64(args.seed)
    for name in ("separated", "separated_inverse"):
        positive, worst, failures = 0, None, 0
        for _ in range(args.count):
            if name == "separated":
                i = random_separated_instance(rng)
                c = check_separated_bound(i["points"], i["S"], i["e"], i["delta"], i["t"])
            else:
                i = random_separated2_instance(rng)
                c = check_separated_bound_inverse(i["T"], i["y"], i["S"], i["e"], i["eps"], i["delta"], i["r"], i["k"])
            failures += not c.holds
            if c.rhs > 0:
                positive += 1
                ratio = c.lhs / c.rhs
                worst = ratio if worst is None else min(worst, ratio)
        print(f"{name}: {args.count} instances, {positive} non-vacuous, min lhs/rhs {float(worst or 0):.4f}, failures {failures}")


if __name__ == "__main__":
    main()
