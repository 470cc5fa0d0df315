"""Circle rotations as an independent oracle for the two-interval case."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InvalidParams
from .iet import Iet, rotation
from .numerics import floor, log_bounds, sort_exact, to_dyadic, to_exact


@dataclass(frozen=True)
class ContinuedFraction:
    """alpha = [a0; a1, a2, ...] with convergents p[k]/q[k], k = 0..len(quotients)."""

    a0: int
    quotients: tuple
    p: tuple
    q: tuple
    terminated: bool = False
    # for quadratic irrationals: quotients[preperiod:preperiod+period] repeats
    preperiod: int | None = None
    period: int | None = None

    def convergent(self, k: int) -> Fraction:
        return Fraction(self.p[k], self.q[k])

    def quotient(self, k: int) -> int:
        """a_k for any k >= 0, using the period when one was detected."""
        if k == 0:
            return self.a0
        if k <= len(self.quotients):
            return self.quotients[k - 1]
        if self.period:
            start = self.preperiod
            return self.quotients[start + (k - 1 - start) % self.period]
        raise IndexError(k)

    def rows(self) -> list[tuple[int, int, int, int]]:
        """(k, a_k, p_k, q_k) for k = 0..n."""
        a = (self.a0,) + tuple(self.quotients)
        return [(k, a[k], self.p[k], self.q[k]) for k in range(len(a))]


def cf_expand(alpha, n: int) -> ContinuedFraction:
    alpha = to_exact(alpha)
    if not 0 < alpha < 1:
        raise InvalidParams("need 0 < alpha < 1")
    a0 = floor(alpha)
    x = alpha - a0
    quotients: list[int] = []
    seen: dict = {}
    preperiod = period = None
    terminated = False
    while len(quotients) < n:
        if x == 0:
            terminated = True
            break
        y = 1 / x
        if preperiod is None and not isinstance(y, Fraction):
            if y in seen:
                preperiod = seen[y]
                period = len(quotients) - preperiod
            else:
                seen[y] = len(quotients)
        a = floor(y)
        quotients.append(a)
        x = y - a
    if not terminated and x == 0:
        terminated = True
    p, q = [a0], [1]
    p_prev, q_prev = 1, 0
    for a in quotients:
        p_prev, p_cur = p[-1], a * p[-1] + p_prev
        q_prev, q_cur = q[-1], a * q[-1] + q_prev
        p.append(p_cur)
        q.append(q_cur)
    return ContinuedFraction(a0, tuple(quotients), tuple(p), tuple(q), terminated, preperiod, period)


def from_quotients(quotients: Sequence[int], a0: int = 0) -> Fraction:
    """The rational [a0; a1, ..., ak]."""
    if not quotients:
        return Fraction(a0)
    x = Fraction(quotients[-1])
    for a in reversed(quotients[:-1]):
        x = a + 1 / x
    return a0 + 1 / x


def rotation_iet(alpha) -> Iet:
    alpha = to_exact(alpha)
    if not 0 < alpha < 1:
        raise InvalidParams("need 0 < alpha < 1")
    return rotation(alpha)


def rotate(x, alpha):
    y = x + alpha
    return y - floor(y)


def circle_points(alpha, n: int) -> list:
    """Distinct sorted points {k alpha}, 0 <= k <= n."""
    alpha = to_exact(alpha)
    pts, x = [], Fraction(0)
    for _ in range(n + 1):
        pts.append(x)
        x = rotate(x, alpha)
    return sort_exact(list(set(pts)))


def three_gaps(alpha, n: int) -> Counter:
    """Multiset of circle gaps cut by 0 and {alpha}, ..., {n alpha}."""
    if n < 1:
        raise InvalidParams("need n >= 1")
    pts = circle_points(alpha, n)
    gaps = [b - a for a, b in zip(pts, pts[1:])]
    gaps.append(1 - pts[-1])
    return Counter(gaps)


def _quotients(alpha):
    """Yield a_1, a_2, ... of alpha in (0, 1) until it terminates."""
    x = alpha
    while x != 0:
        y = 1 / x
        a = floor(y)
        yield a
        x = y - a


def _extremes(alpha, N: int) -> tuple[int, int]:
    """(argmin, argmax) of {k alpha} over 1 <= k < N.

    Both are semiconvergent denominators, so only those are scanned.
    """
    cands = {1}
    q_prev, q = 0, 1
    for a in _quotients(alpha):
        for t in range(1, a + 1):
            c = t * q + q_prev
            if c >= N:
                break
            cands.add(c)
        q_prev, q = q, a * q + q_prev
        if q >= N:
            break
    frac = {c: c * alpha - floor(c * alpha) for c in cands if c < N}
    lo = min(frac, key=lambda c: (frac[c], c))
    hi = max(frac, key=lambda c: (frac[c], -c))
    return lo, hi


def gap_multiplicities(alpha, N: int) -> Counter:
    """Gaps of the N points {k alpha}, 0 <= k < N, on the unit circle.

    With a, b the argmin and argmax of {k alpha} over 1 <= k < N there are
    N - a gaps {a alpha}, N - b gaps 1 - {b alpha} and a + b - N gaps of
    their sum. Points must be distinct (N <= denominator for rationals).
    """
    alpha = to_exact(alpha)
    if N < 1:
        raise InvalidParams("need N >= 1")
    if isinstance(alpha, Fraction) and N > alpha.denominator:
        raise InvalidParams("points repeat beyond the denominator")
    if N == 1:
        return Counter({Fraction(1): 1})
    a, b = _extremes(alpha, N)
    short = a * alpha - floor(a * alpha)
    other = 1 - (b * alpha - floor(b * alpha))
    out = Counter()
    for g, m in ((short, N - a), (other, N - b), (short + other, a + b - N)):
        if m:
            out[g] += m
    return out


def ball_union_measure(gaps: Counter, radius):
    """Measure of the union of open radius-balls about the gap endpoints on
    a circle of total length sum(gaps)."""
    r2 = 2 * to_exact(radius)
    total = Fraction(0)
    for g, m in gaps.items():
        total = total + m * (g if g < r2 else r2)
    return total


@dataclass(frozen=True)
class KurzweilReport:
    lo: Fraction
    hi: Fraction
    max_quotient: int
    terminated: bool
    rows: tuple  # (k, a_k, p_k, q_k, exponent_lo, exponent_hi)

    def badly_approximable(self, bound: int) -> bool:
        return self.max_quotient <= bound


def kurzweil_exponent(alpha, n: int, bits: int = 32) -> KurzweilReport:
    """Certified enclosure of max_{1<=k<=n} log(q_k) / k."""
    if n < 1:
        raise InvalidParams("need n >= 1")
    cf = cf_expand(alpha, n)
    lo = hi = Fraction(0)
    rows = []
    for k, a, p, q in cf.rows():
        if k == 0:
            rows.append((k, a, p, q, Fraction(0), Fraction(0)))
            continue
        llo, lhi = log_bounds(q, bits + 8)
        elo, ehi = to_dyadic(llo / k, lhi / k, bits)
        lo, hi = max(lo, elo), max(hi, ehi)
        rows.append((k, a, p, q, elo, ehi))
    return KurzweilReport(lo, hi, max(cf.quotients, default=0), cf.terminated, tuple(rows))


# -- arithmetic progressions mod Q ------------------------------------------------
def _first_multiple(a: int, m: int, lo: int, hi: int) -> int | None:
    """Least k >= 0 with lo <= a*k mod m <= hi, for 0 <= lo <= hi < m."""
    if lo == 0:
        return 0
    a %= m
    if a == 0:
        return None
    k = -(-lo // a)
    if a * k <= hi:
        return k
    # no multiple of a lands in [lo, hi]; recurse on m*y mod a
    y = _first_multiple(m % a, a, (-hi) % a, (-lo) % a)
    if y is None:
        return None
    return -(-(lo + m * y) // a)


def first_in_range(a: int, m: int, offset: int, lo: int, hi: int) -> int | None:
    """Least k >= 0 with (offset + a*k) mod m in the cyclic range [lo, hi]."""
    if not (0 <= lo < m and 0 <= hi < m):
        raise InvalidParams("range endpoints must lie in [0, m)")
    lo_s, hi_s = (lo - offset) % m, (hi - offset) % m
    if lo_s <= hi_s:
        return _first_multiple(a, m, lo_s, hi_s)
    found = [k for k in (_first_multiple(a, m, lo_s, m - 1), _first_multiple(a, m, 0, hi_s)) if k is not None]
    return min(found, default=None)


def first_return_to_arc(alpha: Fraction, x: Fraction, lo: Fraction, hi: Fraction, start: int = 1) -> int | None:
    """Least k >= start with {x + k alpha} in the open arc (lo, hi) of the
    unit circle, alpha rational. The arc may wrap (lo > hi)."""
    D = math.lcm(alpha.denominator, x.denominator, lo.denominator, hi.denominator)
    A, X = int(alpha * D), int((x + start * alpha) * D) % D
    # integer points strictly inside the arc
    L = math.floor(lo * D) + 1
    R = math.ceil(hi * D) - 1
    count = R - L + 1 if lo < hi else R + D - L + 1
    if count <= 0:
        return None
    k = 0 if count >= D else first_in_range(A, D, X, L % D, R % D)
    return None if k is None else k + start
