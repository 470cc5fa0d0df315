"""Shrinking targets: radius sequences, exact measures of orbit-ball unions,
hitting times and the separation-lemma checkers.

Balls are open (``|T^i x - y| < a_i``) and truncated at the ends of the
domain, unless ``metric="circle"`` wraps them around.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import InvalidParams, OutOfDomainError, OutOfRangeError, PreconditionViolated
from .iet import Iet, distance, min_gap
from .intervals import IntervalSet
from .numerics import format_exact, log_bounds, parse_exact, to_dyadic, to_exact

# -- sequences ------------------------------------------------------------------


class TargetSequence:
    """A positive radius sequence a_1, a_2, ... ."""

    family = ""

    def radius(self, i: int, bound: str | None = None):
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    @staticmethod
    def from_json(data) -> TargetSequence:
        if isinstance(data, str):
            data = json.loads(data)
        fam = data["family"]
        if fam == "harmonic":
            return Harmonic(parse_exact(str(data["c"])))
        if fam == "power":
            return Power(parse_exact(str(data["c"])), int(data["s"]))
        if fam == "logharmonic":
            return LogHarmonic(parse_exact(str(data["c"])))
        if fam == "blocked":
            return Blocked(TargetSequence.from_json(data["base"]), int(data["r"]))
        if fam == "rigid":
            return Rigid(tuple(int(n) for n in data["N"]))
        if fam == "explicit":
            return Explicit(tuple(parse_exact(str(v)) for v in data["values"]))
        raise InvalidParams(f"unknown sequence family {fam!r}")


@dataclass(frozen=True)
class Harmonic(TargetSequence):
    c: Fraction
    family = "harmonic"

    def radius(self, i, bound=None):
        _check_index(i)
        return to_exact(self.c) / i

    def to_json(self):
        return {"family": "harmonic", "c": format_exact(self.c)}


@dataclass(frozen=True)
class Power(TargetSequence):
    """a_i = c / i**s for a positive integer exponent s."""

    c: Fraction
    s: int
    family = "power"

    def radius(self, i, bound=None):
        _check_index(i)
        return to_exact(self.c) / Fraction(i) ** self.s

    def to_json(self):
        return {"family": "power", "c": format_exact(self.c), "s": self.s}


@dataclass(frozen=True)
class LogHarmonic(TargetSequence):
    """a_i = c / (i log(i+1)); only certified lower/upper radii exist."""

    c: Fraction
    family = "logharmonic"
    bits: int = field(default=48, compare=False)

    def radius(self, i, bound=None):
        _check_index(i)
        lo, hi = log_bounds(i + 1, self.bits)
        c = to_exact(self.c)
        if bound == "lower":
            return c / (i * hi)
        if bound == "upper":
            return c / (i * lo)
        raise InvalidParams("LogHarmonic radii need bound='lower' or bound='upper'")

    def to_json(self):
        return {"family": "logharmonic", "c": format_exact(self.c)}


@dataclass(frozen=True)
class Blocked(TargetSequence):
    """b_i = a_{r^k} for r^(k-1) <= i < r^k."""

    base: TargetSequence
    r: int
    family = "blocked"

    def __post_init__(self):
        if self.r < 2:
            raise InvalidParams("blocking ratio r must be >= 2")

    def radius(self, i, bound=None):
        _check_index(i)
        k, p = 1, self.r
        while i >= p:
            p *= self.r
            k += 1
        return self.base.radius(p, bound)

    def to_json(self):
        return {"family": "blocked", "r": self.r, "base": self.base.to_json()}


@dataclass(frozen=True)
class Rigid(TargetSequence):
    """a_i = 1/(2^j N_j) for 2^(j-1) N_(j-1) <= i < 2^j N_j, with N_0 = 1."""

    N: tuple
    family = "rigid"

    def __post_init__(self):
        prev = 1
        for n in self.N:
            if n < prev:
                raise InvalidParams("N must be non-decreasing and start >= 1")
            prev = n

    def block(self, j: int) -> tuple[int, int]:
        """Index range [start, stop) of block j (1-based)."""
        prev = 1 if j == 1 else self.N[j - 2]
        return 2 ** (j - 1) * prev, 2**j * self.N[j - 1]

    def radius(self, i, bound=None):
        _check_index(i)
        for j in range(1, len(self.N) + 1):
            if i < 2**j * self.N[j - 1]:
                return Fraction(1, 2**j * self.N[j - 1])
        raise OutOfRangeError(f"index {i} beyond the last block")

    def to_json(self):
        return {"family": "rigid", "N": list(self.N)}


@dataclass(frozen=True)
class Explicit(TargetSequence):
    values: tuple
    family = "explicit"

    def radius(self, i, bound=None):
        _check_index(i)
        if i > len(self.values):
            raise OutOfRangeError(f"explicit sequence has only {len(self.values)} terms")
        return to_exact(self.values[i - 1])

    def to_json(self):
        return {"family": "explicit", "values": [format_exact(v) for v in self.values]}


def _check_index(i):
    if i < 1:
        raise InvalidParams("sequence indices start at 1")


def eval_sequence(seq: TargetSequence, i: int, bound: str | None = None):
    return seq.radius(i, bound)


def is_two_standard(seq: TargetSequence, r_max: int, horizon: int, bound: str | None = None) -> int | None:
    """Smallest r in [2, r_max] with r^(i-1) a_(r^i) non-increasing on
    [horizon // 2, horizon]; a finite-horizon verdict only.
    """
    if r_max < 2 or horizon < 2:
        raise InvalidParams("need r_max >= 2 and horizon >= 2")
    i0 = max(1, horizon // 2)
    for r in range(2, r_max + 1):
        try:
            vals = [Fraction(r) ** (i - 1) * seq.radius(r**i, bound) for i in range(i0, horizon + 1)]
        except OutOfRangeError:
            continue
        if all(b <= a for a, b in zip(vals, vals[1:])):
            return r
    return None


def partial_sums(seq: TargetSequence, checkpoints: Sequence[int], bound: str | None = None) -> list:
    """[(M, sum_{i<=M} a_i)] for increasing checkpoints M."""
    out, s, i = [], Fraction(0), 0
    for M in sorted(checkpoints):
        while i < M:
            i += 1
            s = s + seq.radius(i, bound)
        out.append((M, s))
    return out


# -- orbit-ball unions ----------------------------------------------------------
def _ball_pieces(center, radius, total, metric):
    a, b = center - radius, center + radius
    if metric == "circle":
        if b - a >= total:
            return [(Fraction(0), total)]
        out = [(max(a, 0), min(b, total))]
        if a < 0:
            out.append((a + total, total))
        if b > total:
            out.append((Fraction(0), b - total))
        return out
    return [(max(a, 0), min(b, total))]


def hit_union(
    T: Iet, x, seq: TargetSequence, N: int, M: int, metric: str = "interval", bound: str | None = None
) -> IntervalSet:
    """Exact union of B(T^i x, a_i) for N <= i <= M."""
    x = to_exact(x)
    if not 1 <= N <= M:
        raise InvalidParams("need 1 <= N <= M")
    if not 0 <= x < T.total:
        raise OutOfDomainError(f"{x} outside the domain")
    pieces = []
    for i, p in enumerate(T.orbit(x, N, M + 1), start=N):
        pieces.extend(_ball_pieces(p, seq.radius(i, bound), T.total, metric))
    return IntervalSet(pieces)


@dataclass
class ExperimentResult:
    checkpoints: list  # (N, M) pairs
    measures: list
    hit_fractions: list

    CSV_HEADER = ("checkpoint_N", "checkpoint_M", "measure_num", "measure_den", "hit_fraction")


def grid_points(total, size: int) -> list:
    """Cell midpoints (k + 1/2) total / size."""
    return [(Fraction(2 * k + 1, 2 * size)) * total for k in range(size)]


def limsup_profile(
    T: Iet,
    x,
    seq: TargetSequence,
    checkpoints: Sequence[tuple[int, int]],
    metric: str = "interval",
    grid: int = 100,
    bound: str | None = None,
) -> ExperimentResult:
    """Exact measures of the finite unions for each (N, M) checkpoint.

    Checkpoints sharing N are evaluated incrementally in increasing M, and the
    result is checked to be non-decreasing in M.
    """
    x = to_exact(x)
    results: dict[tuple[int, int], IntervalSet] = {}
    by_n: dict[int, list[int]] = {}
    for N, M in checkpoints:
        if not 1 <= N <= M:
            raise InvalidParams(f"bad checkpoint {(N, M)}")
        by_n.setdefault(N, []).append(M)
    for N, Ms in by_n.items():
        current = IntervalSet()
        done = N - 1
        xi = T.iterate(x, N) if N else x
        prev_measure = None
        for M in sorted(set(Ms)):
            pieces = list(current.intervals)
            for i, p in enumerate(T.orbit(xi, done + 1 - N, M + 1 - N), start=done + 1):
                pieces.extend(_ball_pieces(p, seq.radius(i, bound), T.total, metric))
            current = IntervalSet(pieces)
            done = M
            m = current.measure
            if prev_measure is not None and m < prev_measure:
                raise AssertionError("union measure decreased in M")
            prev_measure = m
            results[(N, M)] = current
    ys = grid_points(T.total, grid) if grid else []
    measures, fractions = [], []
    for cp in checkpoints:
        S = results[tuple(cp)]
        measures.append(S.measure)
        fractions.append(Fraction(sum(1 for y in ys if y in S), len(ys)) if ys else Fraction(0))
    return ExperimentResult([tuple(c) for c in checkpoints], measures, fractions)


# -- hits -------------------------------------------------------------------------
def first_hit(
    T: Iet, x, y, seq: TargetSequence, N: int, M: int, metric: str = "interval", bound: str | None = None
) -> int | None:
    """Least i in [N, M] with |T^i x - y| < a_i."""
    x, y = to_exact(x), to_exact(y)
    for v in (x, y):
        if not 0 <= v < T.total:
            raise OutOfDomainError(f"{v} outside the domain")
    p = T.iterate(x, N)
    for i in range(N, M + 1):
        if distance(p, y, T.total, metric) < seq.radius(i, bound):
            return i
        p = T.apply(p)
    return None


def hitting_times(T: Iet, x, y, radii: Sequence, cap: int, metric: str = "interval") -> list:
    """tau_r(x, y) for each r in ``radii`` from one orbit scan; None if censored."""
    x, y = to_exact(x), to_exact(y)
    for v in (x, y):
        if not 0 <= v < T.total:
            raise OutOfDomainError(f"{v} outside the domain")
    radii = [to_exact(r) for r in radii]
    if any(r <= 0 for r in radii):
        raise InvalidParams("radii must be positive")
    order = sorted(range(len(radii)), key=lambda k: radii[k], reverse=True)
    out: list = [None] * len(radii)
    pending = list(order)  # largest radius first
    p = x
    best = None
    for n in range(1, cap + 1):
        p = T.apply(p)
        dist = distance(p, y, T.total, metric)
        if best is not None and dist >= best:
            continue
        best = dist
        while pending and dist < radii[pending[0]]:
            out[pending.pop(0)] = n
        if not pending:
            break
    return out


def hitting_time(T: Iet, x, y, r, cap: int, metric: str = "interval") -> int | None:
    """tau_r(x, y) = min{n > 0 : |T^n x - y| < r}, or None past ``cap``."""
    return hitting_times(T, x, y, [r], cap, metric)[0]


def hitting_exponent(tau: int, r, bits: int = 64) -> tuple[Fraction, Fraction]:
    """Dyadic enclosure of log(tau) / (-log r) for 0 < r < 1."""
    r = Fraction(r)
    if not 0 < r < 1:
        raise InvalidParams("need 0 < r < 1")
    tlo, thi = log_bounds(tau, bits + 8)
    rlo, rhi = log_bounds(1 / r, bits + 8)
    return to_dyadic(tlo / rhi, thi / rlo, bits)


# -- separation -------------------------------------------------------------------
def separated_count(points: Sequence, delta) -> int:
    """Largest subset with pairwise distances >= delta (greedy on the line)."""
    delta = to_exact(delta)
    if delta <= 0:
        raise InvalidParams("delta must be positive")
    pts = sorted(to_exact(p) for p in points)
    if not pts:
        return 0
    count, last = 1, pts[0]
    for p in pts[1:]:
        if p - last >= delta:
            count += 1
            last = p
    return count


def min_separation(points: Sequence):
    pts = sorted(points)
    if len(pts) < 2:
        return None
    return min(b - a for a, b in zip(pts, pts[1:]))


@dataclass(frozen=True)
class SeparationCheck:
    lhs: Fraction
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs > self.rhs


def check_separated_bound(points: Sequence, S: IntervalSet, e, delta, t: int | None = None) -> SeparationCheck:
    """Measure of the delta-balls about ``points`` outside S against
    (n - 2t - n eps / e) delta, on the real line.
    """
    e, delta = to_exact(e), to_exact(delta)
    pts = [to_exact(p) for p in points]
    n = len(pts)
    t = len(S) if t is None else t
    if n == 0 or e <= 0 or delta <= 0:
        raise PreconditionViolated("need points, e > 0 and delta > 0")
    if t < len(S):
        raise PreconditionViolated(f"S has {len(S)} intervals, more than t={t}")
    sep = min_separation(pts)
    if sep is not None and sep < e / n:
        raise PreconditionViolated("points are not e/n separated")
    if not delta < e / (2 * n):
        raise PreconditionViolated("delta must be < e/(2n)")
    balls = IntervalSet((p - delta, p + delta) for p in pts)
    lhs = (balls - S).measure
    rhs = (n - 2 * t - n * S.measure / e) * delta
    return SeparationCheck(lhs, rhs)


def inverse_ball_union(T: Iet, y, delta, first: int, last: int) -> IntervalSet:
    """Union of T^-i B(y, delta) for first <= i <= last (ball truncated)."""
    B = IntervalSet(_ball_pieces(to_exact(y), to_exact(delta), T.total, "interval"))
    for _ in range(first):
        B = T.preimage(B)
    pieces = list(B.intervals)
    for _ in range(last - first):
        B = T.preimage(B)
        pieces.extend(B.intervals)
    return IntervalSet(pieces)


def check_separated_bound_inverse(T: Iet, y, S: IntervalSet, e, eps, delta, r: int, k: int) -> SeparationCheck:
    """Preimage variant: measure of the union of T^-i B(y, delta),
    r^k <= i <= r^(k+1), outside S, against
    (1/4)((r^(k+1) - r^k)/2 - 2 r^k - (eps/e) r^(k+1)) delta.
    """
    e, eps, delta = to_exact(e), to_exact(eps), to_exact(delta)
    lo_i, hi_i = r**k, r ** (k + 1)
    if not min_gap(T, hi_i) > e / hi_i:
        raise PreconditionViolated("e_T(r^(k+1)) <= e / r^(k+1)")
    if len(S) > lo_i:
        raise PreconditionViolated("S is a union of more than r^k balls")
    if S.measure > eps:
        raise PreconditionViolated("measure of S exceeds eps")
    if not delta < e / (2 * hi_i):
        raise PreconditionViolated("delta must be < e / (2 r^(k+1))")
    U = inverse_ball_union(T, y, delta, lo_i, hi_i)
    lhs = (U - S).measure
    rhs = Fraction(1, 4) * (Fraction(hi_i - lo_i, 2) - 2 * lo_i - eps / e * hi_i) * delta
    return SeparationCheck(lhs, rhs)


def discontinuity_orbits_distinct(T: Iet, horizon: int) -> bool:
    """Finite-horizon stand-in for 'the discontinuity orbits are infinite
    and distinct': the forward and backward orbits of the breakpoints over
    ``horizon`` steps never repeat and never meet.
    """
    seen = set()
    for b in T.breakpoints[1:-1]:
        pts = T.orbit(b, 0, horizon + 1)
        q = b
        for _ in range(horizon):
            q = T.apply_inverse(q)
            pts.append(q)
        if len(set(pts)) != len(pts) or seen.intersection(pts):
            return False
        seen.update(pts)
    return True
