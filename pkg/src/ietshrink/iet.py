"""Interval exchange transformations: evaluation, inverses, discontinuities,
minimal gaps and first-return induction.

Permutations are tuples ``(pi(1), ..., pi(d))`` of 1-based images: interval
``I_j`` lands in slot ``pi(j)`` of the image.
"""
from __future__ import annotations

import json
import math
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .errors import CapExceededError, InvalidParams, NotReturningError, OutOfDomainError
from .intervals import IntervalSet
from .numerics import common_field, format_exact, parse_exact, sort_exact, to_exact

Permutation = tuple


def check_permutation(perm: Sequence[int]) -> Permutation:
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != list(range(1, len(perm) + 1)):
        raise InvalidParams(f"not a permutation of 1..{len(perm)}: {perm}")
    return perm


def is_irreducible(perm: Sequence[int]) -> bool:
    """True iff pi({1..k}) != {1..k} for every k < d."""
    top = 0
    for k, p in enumerate(perm[:-1], start=1):
        top = max(top, p)
        if top == k:
            return False
    return True


def inverse_permutation(perm: Sequence[int]) -> Permutation:
    inv = [0] * len(perm)
    for j, p in enumerate(perm, start=1):
        inv[p - 1] = j
    return tuple(inv)


@dataclass(frozen=True)
class Iet:
    """A d-IET on ``[0, total)`` given by lengths and a permutation."""

    lengths: tuple
    perm: Permutation

    def __post_init__(self):
        lengths = tuple(to_exact(v) for v in self.lengths)
        perm = check_permutation(self.perm)
        if len(lengths) != len(perm):
            raise InvalidParams("lengths and permutation differ in size")
        if not lengths:
            raise InvalidParams("an IET needs at least one interval")
        if any(v <= 0 for v in lengths):
            raise InvalidParams("lengths must be positive")
        common_field(lengths)
        object.__setattr__(self, "lengths", lengths)
        object.__setattr__(self, "perm", perm)

    # -- derived structure --------------------------------------------------
    @property
    def d(self) -> int:
        return len(self.lengths)

    @cached_property
    def total(self):
        s = Fraction(0)
        for v in self.lengths:
            s = s + v
        return s

    @cached_property
    def breakpoints(self) -> tuple:
        """beta_0 = 0 < beta_1 < ... < beta_d = total."""
        out = [Fraction(0)]
        for v in self.lengths:
            out.append(out[-1] + v)
        return tuple(out)

    @cached_property
    def inverse_perm(self) -> Permutation:
        return inverse_permutation(self.perm)

    @cached_property
    def image_breakpoints(self) -> tuple:
        """Left ends of the image slots, plus total."""
        out = [Fraction(0)]
        for pos in range(1, self.d + 1):
            out.append(out[-1] + self.lengths[self.inverse_perm[pos - 1] - 1])
        return tuple(out)

    @cached_property
    def shifts(self) -> tuple:
        """Translation applied to I_j (0-based j)."""
        img = self.image_breakpoints
        return tuple(img[self.perm[j] - 1] - self.breakpoints[j] for j in range(self.d))

    @property
    def is_irreducible(self) -> bool:
        return is_irreducible(self.perm)

    @property
    def is_rational(self) -> bool:
        return all(isinstance(v, Fraction) for v in self.lengths)

    @cached_property
    def _kernel(self):
        return _RationalKernel(self) if self.is_rational else None

    def interval_index(self, x) -> int:
        """0-based index j with x in I_{j+1}."""
        self._check(x)
        return bisect_right(self.breakpoints, x, 1, self.d) - 1

    def _check(self, x):
        if x < 0 or x >= self.total:
            raise OutOfDomainError(f"{x} not in [0, {self.total})")

    # -- evaluation ---------------------------------------------------------
    def apply(self, x):
        x = to_exact(x)
        return x + self.shifts[self.interval_index(x)]

    __call__ = apply

    def apply_inverse(self, y):
        y = to_exact(y)
        self._check(y)
        pos = bisect_right(self.image_breakpoints, y, 1, self.d) - 1
        j = self.inverse_perm[pos] - 1
        return y - self.shifts[j]

    def iterate(self, x, n: int):
        """T^n(x); negative ``n`` iterates the inverse."""
        x = to_exact(x)
        self._check(x)
        k = self._kernel
        if k is not None and isinstance(x, Fraction):
            return k.iterate(x, n)
        step = self.apply if n >= 0 else self.apply_inverse
        for _ in range(abs(n)):
            x = step(x)
        return x

    def orbit(self, x, start: int, stop: int) -> list:
        """[T^i x for start <= i < stop] with 0 <= start."""
        x = to_exact(x)
        self._check(x)
        if stop <= start:
            return []
        k = self._kernel
        if k is not None and isinstance(x, Fraction):
            return k.orbit(x, start, stop)
        x = self.iterate(x, start)
        out = [x]
        apply = self.apply
        for _ in range(stop - start - 1):
            x = apply(x)
            out.append(x)
        return out

    # -- interval pushing ---------------------------------------------------
    def _pieces(self, lo, hi, cuts):
        """Split [lo, hi) at interior points of ``cuts``."""
        out = []
        cur = lo
        for c in cuts[1:-1]:
            if cur < c < hi:
                out.append((cur, c))
                cur = c
        out.append((cur, hi))
        return out

    def image_interval(self, lo, hi) -> IntervalSet:
        pieces = []
        for a, b in self._pieces(lo, hi, self.breakpoints):
            s = self.shifts[self.interval_index(a)]
            pieces.append((a + s, b + s))
        return IntervalSet(pieces)

    def image(self, S: IntervalSet) -> IntervalSet:
        pieces = []
        for lo, hi in S:
            pieces.extend(self.image_interval(lo, hi).intervals)
        return IntervalSet(pieces)

    def preimage(self, S: IntervalSet) -> IntervalSet:
        pieces = []
        for lo, hi in S:
            for a, b in self._pieces(lo, hi, self.image_breakpoints):
                pre = self.apply_inverse(a)
                pieces.append((pre, pre + (b - a)))
        return IntervalSet(pieces)

    def is_continuous_on(self, lo, hi) -> bool:
        """True iff no breakpoint of T lies inside (lo, hi)."""
        return not any(lo < b < hi for b in self.breakpoints[1:-1])

    def is_inverse_continuous_on(self, lo, hi) -> bool:
        return not any(lo < b < hi for b in self.image_breakpoints[1:-1])

    # -- misc -----------------------------------------------------------------
    def rescale(self, factor) -> Iet:
        return Iet(tuple(v * factor for v in self.lengths), self.perm)

    def normalized(self) -> Iet:
        return self.rescale(1 / self.total)

    def to_json(self) -> dict:
        return {"perm": list(self.perm), "lengths": [format_exact(v) for v in self.lengths]}

    @classmethod
    def from_json(cls, data) -> Iet:
        if isinstance(data, str):
            data = json.loads(data)
        return cls(tuple(parse_exact(s) for s in data["lengths"]), tuple(data["perm"]))

    def __repr__(self):
        ls = ", ".join(format_exact(v) for v in self.lengths)
        return f"Iet(({ls}), {self.perm})"


class _RationalKernel:
    """Integer orbit engine for rational IETs.

    Points are carried as integer multiples of 1/scale, where ``scale`` is a
    multiple of the common denominator of the lengths.
    """

    def __init__(self, T: Iet):
        Q = 1
        for v in T.lengths:
            Q = Q * v.denominator // math.gcd(Q, v.denominator)
        self.Q = Q
        self.T = T
        self._tables: dict[int, tuple] = {}

    def table(self, scale: int):
        t = self._tables.get(scale)
        if t is None:
            T = self.T
            breaks = [int(b * scale) for b in T.breakpoints[1:-1]]
            shifts = [int(s * scale) for s in T.shifts]
            ibreaks = [int(b * scale) for b in T.image_breakpoints[1:-1]]
            ishifts = [-int(T.shifts[j - 1] * scale) for j in T.inverse_perm]
            t = self._tables[scale] = (breaks, shifts, ibreaks, ishifts)
        return t

    def scale_for(self, x: Fraction) -> int:
        den = x.denominator
        return self.Q * den // math.gcd(self.Q, den)

    def iterate(self, x: Fraction, n: int) -> Fraction:
        scale = self.scale_for(x)
        breaks, shifts, ibreaks, ishifts = self.table(scale)
        v = x.numerator * (scale // x.denominator)
        if n >= 0:
            for _ in range(n):
                v += shifts[bisect_right(breaks, v)]
        else:
            for _ in range(-n):
                v += ishifts[bisect_right(ibreaks, v)]
        return Fraction(v, scale)

    def orbit(self, x: Fraction, start: int, stop: int) -> list:
        scale = self.scale_for(x)
        breaks, shifts, _, _ = self.table(scale)
        v = x.numerator * (scale // x.denominator)
        for _ in range(start):
            v += shifts[bisect_right(breaks, v)]
        out = [v]
        append = out.append
        for _ in range(stop - start - 1):
            v += shifts[bisect_right(breaks, v)]
            append(v)
        return [Fraction(v, scale) for v in out]

    def int_orbit(self, x: Fraction, start: int, stop: int) -> tuple[list[int], int]:
        """Integer orbit numerators and their common scale."""
        scale = self.scale_for(x)
        breaks, shifts, _, _ = self.table(scale)
        v = x.numerator * (scale // x.denominator)
        for _ in range(start):
            v += shifts[bisect_right(breaks, v)]
        out = [v]
        append = out.append
        for _ in range(stop - start - 1):
            v += shifts[bisect_right(breaks, v)]
            append(v)
        return out, scale


def rotation(alpha) -> Iet:
    """The 2-IET x -> x + alpha mod 1."""
    alpha = to_exact(alpha)
    if not 0 < alpha < 1:
        raise InvalidParams("rotation number must lie in (0, 1)")
    return Iet((1 - alpha, alpha), (2, 1))


# -- discontinuities and gaps ---------------------------------------------------
def discontinuities(T: Iet, n: int) -> list:
    """Candidate discontinuities of T^n: pullbacks T^-k(beta_j), 0 <= k < n."""
    if n < 1:
        raise InvalidParams("n must be >= 1")
    current = list(T.breakpoints[1:-1])
    found = set(current)
    for _ in range(n - 1):
        current = [T.apply_inverse(p) for p in current]
        found.update(current)
    return sort_exact(list(found))


def min_gap(T: Iet, n: int, metric: str = "interval"):
    """e_T(n): smallest gap between consecutive candidate discontinuities.

    The endpoints 0 and total are adjoined. On the circle (``metric="circle"``)
    0 and total are the same point, so both metrics give the same gaps.
    """
    if metric not in ("interval", "circle"):
        raise InvalidParams(f"unknown metric {metric!r}")
    if T.d == 1:
        return T.total
    pts = [p for p in discontinuities(T, n) if p != 0]
    prev = Fraction(0)
    best = None
    for p in pts + [T.total]:
        g = p - prev
        if best is None or g < best:
            best = g
        prev = p
    return best


def distance(x, y, total=None, metric: str = "interval"):
    """|x - y|, or the circle distance on [0, total) when metric is circle."""
    diff = abs(x - y)
    if metric == "circle":
        return min(diff, total - diff)
    return diff


# -- first return induction -----------------------------------------------------
@dataclass(frozen=True)
class InducedMap:
    """First-return map of T to [u, v), re-based to [0, v - u)."""

    iet: Iet
    return_times: tuple
    u: object
    v: object
    pieces: tuple = field(repr=False)  # domain pieces in original coordinates

    def return_time(self, x) -> int:
        """Return time of a point of [u, v) (original coordinates)."""
        j = self.iet.interval_index(x - self.u)
        return self.return_times[j]


def _first_backward_hit(T: Iet, s, u, v, cap: int, include_zero: bool):
    """First T^-k(s) in [u, v), k >= 0 (or k >= 1); None if the orbit cycles."""
    k = 0
    p = s
    if include_zero and u <= p < v:
        return p
    while k < cap:
        p = T.apply_inverse(p)
        k += 1
        if u <= p < v:
            return p
        if p == s:
            return None
    raise CapExceededError(f"backward orbit of {s} did not reach [{u}, {v}) within {cap} steps")


def induce(T: Iet, u, v, cap: int = 10**6) -> InducedMap:
    """First-return map of T to J = [u, v) as an IET on [0, v - u).

    Cut points are first backward visits to J of the breakpoints and of the
    boundary of J; every piece between cuts returns by a single translation.
    Adjacent pieces with identical translation and return time are merged.
    """
    u, v = to_exact(u), to_exact(v)
    if not (0 <= u < v <= T.total):
        raise InvalidParams(f"need 0 <= u < v <= total, got [{u}, {v})")
    cuts = {u}
    for b in T.breakpoints[1:-1]:
        hit = _first_backward_hit(T, b, u, v, cap, include_zero=True)
        if hit is not None:
            cuts.add(hit)
    for s in (u, v):
        if s >= T.total:
            continue
        hit = _first_backward_hit(T, s, u, v, cap, include_zero=False)
        if hit is not None:
            cuts.add(hit)
    edges = sorted(cuts) + [v]

    raw = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        x = lo
        r = 0
        while True:
            x = T.apply(x)
            r += 1
            if u <= x < v:
                break
            if r >= cap:
                raise CapExceededError(f"point {lo} did not return within {cap} steps")
        raw.append([lo, hi, x - lo, r])

    merged = [raw[0]]
    for piece in raw[1:]:
        last = merged[-1]
        if piece[2] == last[2] and piece[3] == last[3]:
            last[1] = piece[1]
        else:
            merged.append(piece)

    order = sorted(range(len(merged)), key=lambda k: merged[k][0] + merged[k][2])
    cur = u
    for k in order:
        lo, hi, disp, _ = merged[k]
        if lo + disp != cur:
            raise NotReturningError("return map pieces do not tile J (orbit collision)")
        cur = lo + disp + (hi - lo)
    if cur != v:
        raise NotReturningError("return map pieces do not tile J (orbit collision)")
    perm = [0] * len(merged)
    for pos, k in enumerate(order, start=1):
        perm[k] = pos
    lengths = tuple(hi - lo for lo, hi, _, _ in merged)
    return InducedMap(
        iet=Iet(lengths, tuple(perm)),
        return_times=tuple(r for *_, r in merged),
        u=u,
        v=v,
        pieces=tuple((lo, hi) for lo, hi, _, _ in merged),
    )


# -- Boshernitzan continuity window --------------------------------------------------
def continuity_window(T: Iet, lo, hi, n: int):
    """Find p <= 0 <= q, q - p >= n, with T^i [lo, hi) disjoint intervals on
    which T^i acts continuously for p <= i < q. Returns (p, q) or None.

    Verified by pushing the interval forward and backward one step at a time.
    """
    forward = [(lo, hi)]
    for _ in range(n):
        a, b = forward[-1]
        if not T.is_continuous_on(a, b):
            break
        s = T.shifts[T.interval_index(a)]
        forward.append((a + s, b + s))
    backward = [(lo, hi)]
    for _ in range(n):
        a, b = backward[-1]
        if not T.is_inverse_continuous_on(a, b):
            break
        pa = T.apply_inverse(a)
        backward.append((pa, pa + (b - a)))
    # T^i continuous on J for 0 <= i < q needs forward[0..q-1]; likewise for p.
    max_q = len(forward)
    max_back = len(backward) - 1
    for back in range(0, min(max_back, n) + 1):
        p = -back
        q = p + n
        if q > max_q or q < 0:
            continue
        q = max(q, 1)
        sets = [backward[-i] for i in range(p, 0)] + forward[:q]
        sets.sort()
        if all(sets[k][1] <= sets[k + 1][0] for k in range(len(sets) - 1)):
            return p, q
    return None
