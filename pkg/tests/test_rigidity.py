from dataclasses import replace
from fractions import Fraction as F

import pytest

from ietshrink.errors import InvalidParams, TowerNotFoundError
from ietshrink.iet import Iet
from ietshrink.numerics import sqrt
from ietshrink.rigidity import (
    _verify_arithmetic,
    _verify_push,
    block_measure,
    block_range,
    find_tower,
    block_bound,
    rigid_sequence,
    sample_good_points,
    verify_tower,
)
from ietshrink.rotations import from_quotients, rotation_iet
from ietshrink.targets import hit_union

QUOTIENTS = [2, 1, 13, 1, 37, 1, 109, 1, 325, 1, 973, 1, 2917, 1, 1]


@pytest.fixture(scope="module")
def rigid():
    T = rotation_iet(from_quotients(QUOTIENTS))
    return T, rigid_sequence(T, 6, 20000)


def test_bound_formula():
    assert block_bound(3) == F(1, 8) + F(8, 27)


def test_large_quotient_tower():
    q, q2 = 5, 200
    T = rotation_iet(from_quotients([q, q2, 1, 1]))
    tw = find_tower(T, F(1, 50), 1000)
    assert tw is not None
    assert tw.overlap > 1 - F(1, 50)
    check = _verify_push(T, tw)
    assert check.holds(F(1, 50)) and check.cover == tw.cover and check.overlap == tw.overlap


def test_golden_has_no_sharp_tower():
    T = rotation_iet((sqrt(5) - 1) / 2)
    assert find_tower(T, F(1, 100), 30) is None
    with pytest.raises(TowerNotFoundError) as info:
        rigid_sequence(T, 2, 30)
    assert info.value.j == 1


def test_push_and_arithmetic_agree():
    T = rotation_iet(from_quotients([3, 40, 2, 60, 1, 1]))
    for eps in (F(1, 3), F(1, 9), F(1, 27)):
        tw = find_tower(T, eps, 500)
        assert tw is not None and tw.N < 20000
        assert replace(_verify_arithmetic(T, tw), method="push") == _verify_push(T, tw)


def test_random_iet_towers_reverify():
    from ietshrink.rng import sample_random_iet

    found = 0
    for seed in range(30):
        T = sample_random_iet(3 + seed % 3, 10**9, seed)
        tw = find_tower(T, F(1, 3), 40)
        if tw is not None:
            found += 1
            assert verify_tower(T, tw).holds(F(1, 3))
    assert found > 0


def test_rigid_sequence_blocks(rigid):
    T, res = rigid
    assert all(a < b for a, b in zip(res.N, res.N[1:]))
    for b in res.blocks:
        assert b.below_bound, b
        assert b.good_measure >= b.good_floor
        assert b.displacement_ok


def test_rigid_sequence_standard(rigid):
    _, res = rigid
    seq = res.sequence
    for j in range(1, 7):
        start, stop = block_range(res.N, j)
        assert seq.radius(start) == seq.radius(stop - 1) == F(1, 2**j * res.N[j - 1])
        # sum over the block is (stop - start) a_j >= 1/2
        assert (stop - start) * seq.radius(start) >= F(1, 2)
        if j > 1:
            assert seq.radius(start) < seq.radius(start - 1)


def test_three_gap_block_measure_matches_union(rigid):
    T, res = rigid
    for j in (1, 2, 3):
        x = res.blocks[j - 1].x
        start, stop = block_range(res.N, j)
        circle = hit_union(T, x, res.sequence, start, stop - 1, "circle").measure
        interval = hit_union(T, x, res.sequence, start, stop - 1, "interval").measure
        assert block_measure(T, x, res.N, j) == circle
        assert interval <= circle


def test_good_points_lie_in_floors(rigid):
    T, res = rigid
    tw = res.towers[2]
    floors = verify_tower(T, tw)
    assert floors.method == "push"
    for x in sample_good_points(T, tw, 8):
        assert 0 <= x < 1


def test_large_towers_use_arithmetic(rigid):
    T, res = rigid
    tw = res.towers[-1]
    assert tw.N > 10**9
    check = verify_tower(T, tw)
    assert check.method == "arithmetic" and check.holds(tw.eps)


def test_non_rotation_large_tower_refused():
    T = Iet((F(1, 3), F(1, 3), F(1, 3)), (3, 2, 1))
    from ietshrink.rigidity import RigidityTower

    with pytest.raises(InvalidParams):
        verify_tower(T, RigidityTower((F(0), F(1, 3)), 10**7, F(1), F(1), F(1, 2)), push_limit=10)
