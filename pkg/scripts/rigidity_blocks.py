#!/usr/bin/env python
"""Rigid target sequence for a rotation with partial quotients ~ c 3^j.

Prints each tower and the block measure against 2^-j + (2/3)^j. Smaller
constants c show where the block bound starts to fail.
"""
from __future__ import annotations

import argparse

from ietshrink.errors import TowerNotFoundError
from ietshrink.rigidity import rigid_sequence
from ietshrink.rotations import from_quotients, rotation_iet


def quotients(c: int, j_max: int) -> list[int]:
    qs = [2]
    for j in range(1, j_max + 1):
        qs += [1, c * 3**j + 1]
    return qs + [1, 1]


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--j-max", type=int, default=6)
    p.add_argument("--c", type=int, nargs="+", default=[1, 2, 4, 8])
    args = p.parse_args()
    print("c,j,N_j,overlap,block_measure,bound,below")
    for c in args.c:
        T = rotation_iet(from_quotients(quotients(c, args.j_max)))
        try:
            res = rigid_sequence(T, args.j_max, 100_000)
        except TowerNotFoundError as exc:
            print(f"{c},{exc.j},,,,,no tower")
            continue
        for tw, b in zip(res.towers, res.blocks):
            print(f"{c},{b.j},{b.N},{float(tw.overlap):.6f},{float(b.measure):.6f},{float(b.bound):.6f},{b.below_bound}")


if __name__ == "__main__":
    main()
