"""The eleven acceptance criteria, each at its stated tolerance and budget.

Every test prints one PASS/FAIL line (visible without ``-s``).
"""
import time
from fractions import Fraction as F
from pathlib import Path

import pytest

from ietshrink.errors import NotInGeneralPositionError
from ietshrink.experiments import ExperimentConfig, random_separated2_instance, random_separated_instance, run_experiment
from ietshrink.iet import Iet, min_gap
from ietshrink.numerics import sqrt
from ietshrink.rauzy import column_sum_identity, iet_from_column, perron_iet, rv_path, rv_walk, smallest_positive_k
from ietshrink.rigidity import _verify_push, find_tower, rigid_sequence, verify_tower
from ietshrink.rng import SplitMix64, sample_random_iet
from ietshrink.rotations import from_quotients, rotation_iet, three_gaps
from ietshrink.targets import (
    Harmonic,
    check_separated_bound,
    check_separated_bound_inverse,
    hitting_exponent,
    hitting_times,
    limsup_profile,
)

CONFIGS = Path(__file__).resolve().parents[1] / "scripts" / "configs"


@pytest.fixture
def report(capsys):
    def _report(n: int, ok: bool, detail: str):
        with capsys.disabled():
            print(f"\ncriterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail

    return _report


def euclid_quotients(p: int, q: int) -> list[int]:
    out = []
    while q:
        out.append(p // q)
        p, q = q, p % q
    return out


def run_lengths(word: str) -> list[tuple[str, int]]:
    runs: list = []
    for c in word:
        if runs and runs[-1][0] == c:
            runs[-1][1] += 1
        else:
            runs.append([c, 1])
    return [tuple(r) for r in runs]


def test_1_euclid_correspondence(report):
    rng = SplitMix64(1)
    t0 = time.perf_counter()
    bad = 0
    for _ in range(200):
        Q = rng.randint(2, 10**4)
        k = rng.randint(1, Q - 1)
        T = Iet((F(k, Q), F(Q - k, Q)), (2, 1))
        word = list(rv_walk(T))[-1].steps
        # l1/l2 = [a0; a1, ..., am]: runs a0, a1, ..., am - 1 of alternating
        # letters starting with 'a'; zero runs vanish
        cf = euclid_quotients(k, Q - k)
        cf[-1] -= 1
        expected = [("ab"[i % 2], a) for i, a in enumerate(cf) if a > 0]
        bad += run_lengths(word) != expected
    dt = time.perf_counter() - t0
    report(1, bad == 0 and dt < 5, f"200 rational 2-IETs, {bad} mismatches, {dt:.2f}s")


def test_2_column_sums_are_return_times(report):
    t0 = time.perf_counter()
    bad = checked = 0
    for seed in range(100):
        T = sample_random_iet(3 + seed % 3, 10**9, seed)
        for rec in rv_walk(T, 15):
            checked += 1
            bad += not column_sum_identity(T, rec)
    dt = time.perf_counter() - t0
    report(2, bad == 0 and dt < 30, f"{checked} (IET, depth) pairs, {bad} mismatches, {dt:.2f}s")


def test_3_prescribed_induction_replay(report):
    rng = SplitMix64(3)
    t0 = time.perf_counter()
    cases = bad = 0
    while cases < 50:
        T = sample_random_iet(rng.randint(3, 4), 10**12, rng)
        n = rng.randint(1, 6)
        try:
            k = smallest_positive_k(T, n, 60)
        except NotInGeneralPositionError:
            continue
        if k is None:
            continue
        S = iet_from_column(T, n, k, rng.randint(1, T.d))
        a, b = rv_path(S, n), rv_path(T, n)
        cases += 1
        bad += (a.steps, a.matrix, a.induced.perm) != (b.steps, b.matrix, b.induced.perm)
    dt = time.perf_counter() - t0
    report(3, bad == 0 and dt < 10, f"{cases} cases, {bad} disagreements, {dt:.2f}s")


def test_4_three_gap_oracle(report):
    rng = SplitMix64(4)
    bad = 0
    for _ in range(100):
        q = rng.randint(2, 5000)
        alpha = F(rng.randint(1, q - 1), q)
        n = rng.randint(1, 100)
        bad += min_gap(rotation_iet(alpha), n, "circle") != min(three_gaps(alpha, n))
    report(4, bad == 0, f"100 rational rotations, {bad} mismatches")


def test_5_separation_lemmas(report):
    rng = SplitMix64(5)
    fail1 = fail2 = 0
    for _ in range(500):
        i = random_separated_instance(rng)
        fail1 += not check_separated_bound(i["points"], i["S"], i["e"], i["delta"], i["t"]).holds
    for _ in range(500):
        i = random_separated2_instance(rng)
        fail2 += not check_separated_bound_inverse(i["T"], i["y"], i["S"], i["e"], i["eps"], i["delta"], i["r"], i["k"]).holds
    report(5, fail1 == 0 and fail2 == 0, f"500 + 500 instances, failures {fail1} + {fail2}")


def test_6_rigidity_block_bound(report):
    t0 = time.perf_counter()
    T = rotation_iet(from_quotients([2, 1, 13, 1, 37, 1, 109, 1, 325, 1, 973, 1, 2917, 1, 1]))
    res = rigid_sequence(T, 6, 20000)
    dt = time.perf_counter() - t0
    ok = all(b.below_bound and b.good_measure >= b.good_floor and b.displacement_ok for b in res.blocks)
    detail = ", ".join(f"j={b.j}: {float(b.measure):.4f} < {float(b.bound):.4f}" for b in res.blocks)
    report(6, ok and len(res.blocks) == 6 and dt < 60, f"{detail}; {dt:.2f}s")


def test_7_kurzweil_growth(report):
    t0 = time.perf_counter()
    T = rotation_iet((sqrt(5) - 1) / 2)
    Ms = [10**3, 3 * 10**3, 10**4, 3 * 10**4, 10**5]
    res = limsup_profile(T, 0, Harmonic(F(1, 10)), [(1, M) for M in Ms], grid=0)
    dt = time.perf_counter() - t0
    ok = res.measures == sorted(res.measures) and res.measures[-1] > F(9, 10) and dt < 60
    report(7, ok, f"measures {[round(float(m), 4) for m in res.measures]}, {dt:.2f}s")


def test_8_kim_marmi_exponent(report):
    t0 = time.perf_counter()
    T = perron_iet((2, 1), "ab")
    ks = list(range(4, 17))
    taus = hitting_times(T, F(0), F(1, 2), [F(1, 2**k) for k in ks], 10**8)
    lo, hi = hitting_exponent(taus[-1], F(1, 2**16))
    dt = time.perf_counter() - t0
    ok = None not in taus and lo >= F(4, 5) and hi <= F(6, 5) and dt < 60
    report(8, ok, f"tau(2^-16) = {taus[-1]}, exponent in [{float(lo):.4f}, {float(hi):.4f}], {dt:.2f}s")


def test_9_towers_reverify(report):
    towers = []
    for seed in range(40):
        T = sample_random_iet(2 + seed % 4, 10**9, seed)
        tw = find_tower(T, F(1, 3), 60)
        if tw:
            towers.append((T, tw))
    for qs in ([5, 200, 1, 1], [3, 40, 2, 60, 1, 1], [1, 30, 1, 90, 1, 1]):
        T = rotation_iet(from_quotients(qs))
        for eps in (F(1, 3), F(1, 9), F(1, 27)):
            tw = find_tower(T, eps, 400)
            if tw:
                towers.append((T, tw))
    T = rotation_iet(from_quotients([2, 1, 13, 1, 37, 1, 109, 1, 325, 1, 973, 1, 2917, 1, 1]))
    big = []
    for j, tw in enumerate(rigid_sequence(T, 6, 20000).towers, start=1):
        (towers if tw.N <= 200_000 else big).append((T, tw))
    pushed = all(_verify_push(T, tw).holds(tw.eps, T.total) for T, tw in towers)
    arithmetic = all(verify_tower(T, tw).holds(tw.eps, T.total) for T, tw in big)
    report(9, pushed and arithmetic and len(towers) > 10,
           f"{len(towers)} towers re-verified by pushing, {len(big)} rotation towers of height > 2e5 by exact progression counting")


def test_10_fast_path(report):
    Q = 2**62 + 1
    T = Iet((F(Q // 3, Q), F(Q // 5, Q), F(Q // 7, Q), F(Q - Q // 3 - Q // 5 - Q // 7, Q)), (3, 1, 4, 2))
    x = F(987654321, Q)
    t0 = time.perf_counter()
    y = T.iterate(x, 10**6)
    dt = time.perf_counter() - t0
    assert T.iterate(y, -(10**6)) == x
    report(10, dt < 1.0, f"10^6 exact iterations, Q = 2^62 + 1, {dt:.3f}s")


def test_11_determinism(report):
    paths = sorted(CONFIGS.glob("*.json"))
    same = []
    for p in paths:
        cfg = ExperimentConfig.from_json(p.read_text())
        same.append(run_experiment(cfg).csv_text() == run_experiment(ExperimentConfig.from_json(p.read_text())).csv_text())
    report(11, paths != [] and all(same), f"{len(paths)} configs, byte-identical reruns: {sum(same)}")
