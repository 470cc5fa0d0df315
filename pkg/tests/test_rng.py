from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from ietshrink.errors import InvalidParams
from ietshrink.iet import is_irreducible
from ietshrink.rng import SplitMix64, random_composition, sample_random_iet


def test_splitmix_vector():
    rng = SplitMix64(1234567)
    assert [rng.next_u64() for _ in range(5)] == [
        6457827717110365317,
        3203168211198807973,
        9817491932198370423,
        4593380528125082431,
        16408922859458223821,
    ]


@given(st.integers(0, 2**64 - 1), st.integers(1, 2**70))
def test_below_in_range(seed, n):
    assert 0 <= SplitMix64(seed).below(n) < n


@given(st.integers(2, 6), st.integers(0, 200), st.integers(0, 2**64 - 1))
def test_sampler(d, extra, seed):
    Q = d + extra
    T = sample_random_iet(d, Q, seed)
    assert sum(T.lengths) == 1
    assert all(v > 0 and (v * Q).denominator == 1 for v in T.lengths)
    assert is_irreducible(T.perm)
    assert sample_random_iet(d, Q, seed) == T


def test_forced_sample():
    assert sample_random_iet(2, 2, 99).lengths == (F(1, 2), F(1, 2))
    with pytest.raises(InvalidParams):
        sample_random_iet(3, 2, 0)


def test_composition_roughly_uniform():
    # compositions of 5 into 3 parts: C(4, 2) = 6, each about 1/6
    rng = SplitMix64(7)
    counts: dict = {}
    for _ in range(6000):
        c = tuple(random_composition(rng, 5, 3))
        counts[c] = counts.get(c, 0) + 1
    assert len(counts) == 6
    assert all(800 < v < 1200 for v in counts.values())
