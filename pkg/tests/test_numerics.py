from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ietshrink.errors import MixedFieldError
from ietshrink.numerics import (
    Quadratic,
    compare,
    floor,
    format_exact,
    join_exact,
    log2_bounds,
    log_bounds,
    parse_exact,
    quadratic,
    sort_exact,
    split_exact,
    sqrt,
    to_exact,
)

GOLDEN = (sqrt(5) - 1) / 2


def test_golden_square():
    assert GOLDEN * GOLDEN == (3 - sqrt(5)) / 2
    assert 1 / GOLDEN == (1 + sqrt(5)) / 2
    assert compare(GOLDEN, Fraction(3, 5)) == 1
    assert floor(10 * GOLDEN) == 6


def test_rational_results_demote():
    x = (sqrt(5) + 1) - sqrt(5)
    assert isinstance(x, Fraction) and x == 1


def test_mixed_fields_rejected():
    with pytest.raises(MixedFieldError):
        sqrt(2) + sqrt(3)


def test_squarefree_normalization():
    assert sqrt(8) == 2 * sqrt(2)
    assert sqrt(9) == 3


def test_floats_rejected():
    with pytest.raises(TypeError):
        to_exact(0.5)


@given(st.integers(-50, 50), st.integers(-50, 50), st.integers(1, 30), st.sampled_from([2, 3, 5, 7]))
def test_format_roundtrip(a, b, c, D):
    x = quadratic(a, b, c, D)
    assert parse_exact(format_exact(x)) == x
    assert join_exact(*split_exact(x)) == x


@given(st.integers(-50, 50), st.integers(-50, 50), st.integers(1, 30), st.integers(-50, 50), st.integers(-50, 50), st.integers(1, 30))
def test_order_matches_floats(a, b, c, e, f, g):
    x, y = quadratic(a, b, c, 5), quadratic(e, f, g, 5)
    fx, fy = float(x), float(y)
    if abs(fx - fy) > 1e-9:
        assert (x < y) == (fx < fy)


@given(st.lists(st.tuples(st.integers(-99, 99), st.integers(-9, 9)), max_size=40))
def test_sort_exact(pairs):
    xs = [quadratic(a, b, 7, 2) for a, b in pairs]
    out = sort_exact(xs)
    assert all(u <= v for u, v in zip(out, out[1:]))
    assert sorted(map(float, out)) == sorted(map(float, xs))


@given(st.integers(1, 10**12))
def test_log_bounds_enclose(n):
    import math

    lo, hi = log_bounds(n, 40)
    assert lo <= hi and hi - lo <= Fraction(1, 2**38)
    assert float(lo) - 1e-9 <= math.log(n) <= float(hi) + 1e-9


def test_log2_exact_power():
    lo, hi = log2_bounds(1024, 32)
    assert lo <= 10 <= hi


def test_quadratic_requires_all_parts():
    with pytest.raises(TypeError):
        Quadratic(1, 1, 2)
