from fractions import Fraction as F
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from conftest import fractions_in, rational_iets
from ietshrink.errors import OutOfDomainError, OutOfRangeError, PreconditionViolated
from ietshrink.iet import Iet, distance, rotation
from ietshrink.intervals import IntervalSet
from ietshrink.numerics import sqrt
from ietshrink.targets import (
    Blocked,
    Explicit,
    Harmonic,
    LogHarmonic,
    Power,
    Rigid,
    TargetSequence,
    check_separated_bound,
    eval_sequence,
    first_hit,
    hit_union,
    hitting_time,
    is_two_standard,
    limsup_profile,
    partial_sums,
    separated_count,
)

QUARTER = Iet((F(3, 4), F(1, 4)), (2, 1))
GOLDEN = rotation((sqrt(5) - 1) / 2)


def test_sequence_values():
    assert eval_sequence(Harmonic(F(1, 10)), 4) == F(1, 40)
    assert eval_sequence(Blocked(Harmonic(F(1)), 2), 3) == F(1, 4)
    assert eval_sequence(Power(F(1), 2), 3) == F(1, 9)
    seq = Rigid((3, 10))
    assert [seq.radius(i) for i in (1, 5, 6, 39)] == [F(1, 6), F(1, 6), F(1, 40), F(1, 40)]
    with pytest.raises(OutOfRangeError):
        seq.radius(40)
    with pytest.raises(OutOfRangeError):
        Explicit((F(1),)).radius(2)


def test_logharmonic_bounds_bracket():
    s = LogHarmonic(F(1))
    import math

    for i in (1, 10, 1000):
        lo, hi = s.radius(i, "lower"), s.radius(i, "upper")
        assert lo <= 1 / (i * math.log(i + 1)) <= hi
        assert hi - lo < F(1, 10**10)


def test_json_roundtrip():
    seq = Blocked(Harmonic(F(1, 10)), 2)
    assert seq.to_json() == {"family": "blocked", "r": 2, "base": {"family": "harmonic", "c": "1/10"}}
    for s in (seq, Power(F(1, 3), 2), Rigid((1, 4)), Explicit((F(1, 2), F(1, 3))), LogHarmonic(F(1))):
        assert TargetSequence.from_json(s.to_json()) == s


def test_two_standard():
    assert is_two_standard(Harmonic(F(1)), 5, 12) == 2
    assert is_two_standard(Power(F(1), 2), 5, 12) == 2
    assert is_two_standard(Explicit(tuple(F(k) for k in range(1, 200))), 5, 4) is None


def test_blocked_partial_sums_comparable():
    base = Harmonic(F(1))
    b = Blocked(base, 2)
    for (M, sb), (_, sa) in zip(partial_sums(b, [4**k for k in range(1, 5)]), partial_sums(base, [4**k for k in range(1, 5)])):
        assert sa / 4 <= sb <= sa


def test_hit_union_quarter_rotation():
    S = hit_union(QUARTER, 0, Explicit((F(1, 100),) * 4), 1, 4)
    assert S.measure == 4 * F(2, 100) - F(1, 100)
    assert F(1, 2) in S and F(1, 4) in S


def test_hit_union_identity_and_cover():
    ident = Iet((F(1, 2), F(1, 2)), (1, 2))
    S = hit_union(ident, F(1, 3), Harmonic(F(1, 10)), 1, 50)
    assert S == IntervalSet.interval(F(1, 3) - F(1, 10), F(1, 3) + F(1, 10))
    assert hit_union(GOLDEN, 0, Explicit((F(1, 2),) * 3), 1, 3).measure == 1
    with pytest.raises(OutOfDomainError):
        hit_union(GOLDEN, 1, Harmonic(F(1)), 1, 2)


@given(rational_iets(d_max=4, q_max=500), st.data())
def test_monotone_in_sequence(T, data):
    x = data.draw(fractions_in(0, 1, 100))
    a, b = Harmonic(F(1, 10)), Harmonic(F(1, 20))
    assert hit_union(T, x, b, 1, 30) <= hit_union(T, x, a, 1, 30)


def test_profile_monotone_and_single_ball():
    res = limsup_profile(GOLDEN, 0, Harmonic(F(1, 10)), [(1, 10), (1, 100), (1, 1000)], grid=50)
    assert res.measures == sorted(res.measures)
    assert all(m <= 1 for m in res.measures)
    single = limsup_profile(QUARTER, 0, Harmonic(F(1, 10)), [(3, 3)], grid=0)
    assert single.measures == [F(2, 30)]


def test_rational_rotation_periodicity():
    # with period 4, the union over [1, M] is four balls of radius a_1..a_4
    # about the orbit, independent of M
    res = limsup_profile(QUARTER, F(1, 8), Harmonic(F(1, 10)), [(1, 4), (1, 400)], grid=0)
    direct = IntervalSet.ball(F(3, 8), F(1, 10), 0, 1) | IntervalSet.ball(F(5, 8), F(1, 20), 0, 1) | IntervalSet.ball(F(7, 8), F(1, 30), 0, 1) | IntervalSet.ball(F(1, 8), F(1, 40), 0, 1)
    assert res.measures == [direct.measure, direct.measure]


def test_first_hit_and_hitting_time():
    assert first_hit(QUARTER, 0, F(1, 2), Harmonic(F(1, 10)), 1, 10) == 2
    assert first_hit(QUARTER, 0, F(1, 8), Harmonic(F(1, 100)), 1, 100) is None
    assert hitting_time(QUARTER, 0, F(1, 2), F(1, 10), 100) == 2
    assert hitting_time(GOLDEN, 0, F(1, 3), F(2), 10) == 1


@given(fractions_in(0, 1, 1000))
def test_first_hit_is_least(y):
    seq = Harmonic(F(1, 10))
    i = first_hit(GOLDEN, 0, y, seq, 1, 200)
    if i is not None:
        assert distance(GOLDEN.iterate(0, i), y) < seq.radius(i)
        for k in range(1, i):
            assert not distance(GOLDEN.iterate(0, k), y) < seq.radius(k)


def test_separated_count():
    pts = [F(1, 10), F(3, 20), F(3, 10), F(9, 10)]
    best = max(len(c) for r in range(5) for c in combinations(pts, r)
               if all(abs(a - b) >= F(1, 5) for a, b in combinations(c, 2)))
    assert separated_count(pts, F(1, 5)) == best == 3
    assert separated_count(pts, F(2)) == 1
    assert separated_count([F(k, 7) for k in range(7)], F(1, 7)) == 7


def test_separated_bound_examples():
    c = check_separated_bound([F(k, 4) for k in range(4)], IntervalSet(), 1, F(1, 16))
    assert c.lhs == F(1, 2) and c.rhs == F(1, 4) and c.holds
    c = check_separated_bound([F(k, 4) for k in range(4)], IntervalSet([(0, F(1, 100)), (F(1, 2), F(51, 100))]), 1, F(1, 16), t=2)
    assert c.rhs <= 0 and c.holds
    with pytest.raises(PreconditionViolated):
        check_separated_bound([F(0), F(1, 100)], IntervalSet(), 1, F(1, 1000))
    with pytest.raises(PreconditionViolated):
        check_separated_bound([F(0), F(1, 2)], IntervalSet(), 1, F(1, 4))
