"""SplitMix64 and the random IET sampler built on it.

SplitMix64 (Steele, Lea and Flood 2014) is tiny, completely defined and easy
to reproduce in any language, which is what cross-language reruns need.
For seed 1234567 its first outputs are 6457827717110365317,
3203168211198807973, 9817491932198370423.
"""
from __future__ import annotations

from fractions import Fraction

from .errors import InvalidParams
from .iet import Iet, is_irreducible

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection; n may exceed 2^64."""
        if n < 1:
            raise InvalidParams("bound must be positive")
        words = max(1, (n.bit_length() + 63) // 64)
        span = 1 << (64 * words)
        limit = span - span % n
        while True:
            v = 0
            for _ in range(words):
                v = (v << 64) | self.next_u64()
            if v < limit:
                return v % n

    def randint(self, a: int, b: int) -> int:
        """Uniform integer in [a, b]."""
        return a + self.below(b - a + 1)

    def fraction(self, Q: int) -> Fraction:
        """Uniform k/Q with 0 <= k < Q."""
        return Fraction(self.below(Q), Q)

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]

    def subset(self, n: int, k: int) -> list[int]:
        """Uniform k-subset of {1..n}, sorted (Floyd's algorithm)."""
        if not 0 <= k <= n:
            raise InvalidParams("need 0 <= k <= n")
        chosen: set[int] = set()
        for j in range(n - k + 1, n + 1):
            t = self.randint(1, j)
            chosen.add(j if t in chosen else t)
        return sorted(chosen)


def random_composition(rng: SplitMix64, Q: int, d: int) -> list[int]:
    cuts = [0] + rng.subset(Q - 1, d - 1) + [Q]
    return [b - a for a, b in zip(cuts, cuts[1:])]


def random_irreducible_permutation(rng: SplitMix64, d: int) -> tuple:
    while True:
        perm = list(range(1, d + 1))
        rng.shuffle(perm)
        if is_irreducible(perm):
            return tuple(perm)


def sample_random_iet(d: int, Q: int, seed: int | SplitMix64) -> Iet:
    """Lengths k_i/Q from a uniform composition of Q into d positive parts
    and a uniform irreducible permutation."""
    if d < 2 or Q < d:
        raise InvalidParams("need d >= 2 and Q >= d")
    rng = seed if isinstance(seed, SplitMix64) else SplitMix64(seed)
    parts = random_composition(rng, Q, d)
    perm = random_irreducible_permutation(rng, d)
    return Iet(tuple(Fraction(k, Q) for k in parts), perm)
