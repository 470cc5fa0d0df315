import time
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from conftest import fractions_in, rational_iets
from ietshrink.errors import InvalidParams, NotReturningError, OutOfDomainError
from ietshrink.iet import (
    Iet,
    continuity_window,
    discontinuities,
    distance,
    induce,
    is_irreducible,
    min_gap,
    rotation,
)
from ietshrink.intervals import IntervalSet
from ietshrink.numerics import sqrt


def test_two_interval_example():
    T = Iet((F(3, 10), F(7, 10)), (2, 1))
    assert T(F(0)) == F(7, 10)
    assert T(F(3, 10)) == 0
    assert T.apply_inverse(F(7, 10)) == 0
    assert discontinuities(T, 1) == [F(3, 10)]
    assert discontinuities(T, 2) == [F(3, 10), F(3, 5)]
    assert min_gap(T, 1) == F(3, 10)


def test_domain_checks():
    T = rotation(F(1, 4))
    with pytest.raises(OutOfDomainError):
        T(F(1))
    with pytest.raises(InvalidParams):
        Iet((F(1, 2), F(0)), (2, 1))


def test_irreducibility():
    assert is_irreducible((2, 1))
    assert not is_irreducible((1, 2))
    assert not is_irreducible((2, 1, 3))
    assert is_irreducible((3, 2, 1))


@given(rational_iets(), st.data())
def test_inverse_and_measure(T, data):
    x = data.draw(fractions_in(0, 1))
    assert T.apply_inverse(T(x)) == x
    assert T.iterate(T.iterate(x, 7), -7) == x
    lo = data.draw(fractions_in(0, 1))
    hi = lo + (1 - lo) * data.draw(fractions_in(0, 1))
    if lo < hi:
        assert T.image_interval(lo, hi).measure == hi - lo
        assert T.preimage(T.image_interval(lo, hi)) == IntervalSet.interval(lo, hi)


@given(rational_iets(d_max=4, q_max=200), st.integers(1, 40))
def test_orbit_matches_iteration(T, n):
    x = T.breakpoints[1] / 3
    orb = T.orbit(x, 0, n)
    p = x
    for q in orb:
        assert q == p
        p = T(p)


def test_quadratic_orbit():
    g = (sqrt(5) - 1) / 2
    T = rotation(g)
    x = F(0)
    for _ in range(50):
        y = T(x)
        z = x + g
        assert y == (z if z < 1 else z - 1)
        x = y


def test_induce_examples():
    T = Iet((F(5, 8), F(3, 8)), (2, 1))
    ind = induce(T, 0, F(5, 8))
    assert ind.iet == Iet((F(1, 4), F(3, 8)), (2, 1))
    assert ind.return_times == (1, 2)
    whole = induce(T, 0, 1)
    assert whole.iet == T and whole.return_times == (1, 1)


@given(rational_iets(d_max=4, q_max=300), st.data())
def test_induced_map_is_first_return(T, data):
    v = data.draw(fractions_in(F(1, 10), 1, 50))
    try:
        ind = induce(T, 0, v)
    except NotReturningError:
        return
    x = data.draw(fractions_in(0, v, 50))
    y, r = T(x), 1
    while not y < v:
        y, r = T(y), r + 1
    assert ind.iet(x) == y
    assert ind.return_time(x) == r


def test_min_gap_periodic_rotation_counts_zero_once():
    T = rotation(F(6, 7))
    assert min_gap(T, 68, "circle") == F(1, 7)


def test_distance_metrics():
    assert distance(F(1, 10), F(9, 10)) == F(4, 5)
    assert distance(F(1, 10), F(9, 10), 1, "circle") == F(1, 5)


def test_continuity_window():
    T = rotation((sqrt(5) - 1) / 2)
    p, q = continuity_window(T, F(0), F(1, 1000), 50)
    assert p <= 0 <= q and q - p >= 50


def test_rational_fast_path():
    T = Iet((F(2**61 - 1, 2**62), F(3, 2**62), F(2**60, 2**62), F(2**62 - 2**61 - 2**60 - 2, 2**62)), (4, 3, 2, 1))
    x = F(12345, 2**62)
    t = time.perf_counter()
    y = T.iterate(x, 10**6)
    assert time.perf_counter() - t < 1.0
    assert T.iterate(y, -(10**6)) == x
