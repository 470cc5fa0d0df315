from fractions import Fraction as F

from hypothesis import given, strategies as st

from ietshrink.intervals import IntervalSet
from ietshrink.numerics import sqrt

pieces = st.lists(
    st.tuples(st.integers(0, 60), st.integers(1, 20)).map(lambda p: (F(p[0], 4), F(p[0] + p[1], 4))),
    max_size=12,
)


def _grid_member(S, x):
    return any(lo <= x < hi for lo, hi in S.intervals)


@given(pieces)
def test_normalized(ps):
    S = IntervalSet(ps)
    ivs = S.intervals
    assert all(lo < hi for lo, hi in ivs)
    assert all(a[1] < b[0] for a, b in zip(ivs, ivs[1:]))


@given(pieces, pieces)
def test_algebra_pointwise(a, b):
    A, B = IntervalSet(a), IntervalSet(b)
    for k in range(0, 4 * 85):
        x = F(2 * k + 1, 8)
        ina, inb = x in A, x in B
        assert (x in (A | B)) == (ina or inb)
        assert (x in (A & B)) == (ina and inb)
        assert (x in (A - B)) == (ina and not inb)


@given(pieces, pieces)
def test_measure_inclusion_exclusion(a, b):
    A, B = IntervalSet(a), IntervalSet(b)
    assert (A | B).measure + (A & B).measure == A.measure + B.measure


def test_ball_truncated_and_wrapped():
    assert IntervalSet.ball(F(0), F(1, 10), 0, 1).measure == F(1, 10)
    assert IntervalSet.ball(F(0), F(1, 10), 0, 1, circle=True).measure == F(1, 5)
    assert IntervalSet.ball(F(1, 2), F(1), 0, 1, circle=True) == IntervalSet.interval(0, 1)


def test_quadratic_endpoints_and_json():
    g = (sqrt(5) - 1) / 2
    S = IntervalSet([(0, g), (F(1, 2), 1)])
    assert S == IntervalSet.interval(0, 1)
    T = IntervalSet([(0, g / 2), (g, 1)])
    assert IntervalSet.from_json(T.to_json()) == T
    assert T.measure == 1 - g / 2
