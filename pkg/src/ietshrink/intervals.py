"""Finite unions of half-open intervals with exact endpoints."""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Iterator

from .numerics import format_exact, parse_exact, sort_exact, to_exact

Interval = tuple  # (lo, hi) with lo < hi


class IntervalSet:
    """Sorted, disjoint, non-adjacent union of ``[lo, hi)`` pieces.

    Open balls are stored as their half-open hull; the two differ by an
    endpoint, which never changes a measure.
    """

    __slots__ = ("intervals",)

    def __init__(self, intervals: Iterable[Interval] = (), *, _normalized: bool = False):
        if _normalized:
            self.intervals = tuple(intervals)
            return
        pieces = sort_exact([(lo, hi) for lo, hi in intervals if lo < hi], key=lambda p: p[0])
        merged: list[list] = []
        for lo, hi in pieces:
            if merged and lo <= merged[-1][1]:
                if hi > merged[-1][1]:
                    merged[-1][1] = hi
            else:
                merged.append([lo, hi])
        self.intervals = tuple((lo, hi) for lo, hi in merged)

    @classmethod
    def interval(cls, lo, hi) -> IntervalSet:
        return cls([(lo, hi)])

    @classmethod
    def ball(cls, center, radius, lo=0, hi=None, *, circle: bool = False) -> IntervalSet:
        """Open ball about ``center`` inside the domain ``[lo, hi)``.

        With ``circle=True`` the domain is a circle of length ``hi - lo`` and
        the ball wraps; otherwise it is truncated at the edges.
        """
        a, b = center - radius, center + radius
        if hi is None:
            return cls([(a, b)])
        if not circle:
            return cls([(max(a, lo), min(b, hi))])
        period = hi - lo
        if b - a >= period:
            return cls([(lo, hi)])
        pieces = [(max(a, lo), min(b, hi))]
        if a < lo:
            pieces.append((a + period, hi))
        if b > hi:
            pieces.append((lo, b - period))
        return cls(pieces)

    # -- queries ------------------------------------------------------------
    @property
    def measure(self):
        total = Fraction(0)
        for lo, hi in self.intervals:
            total = total + (hi - lo)
        return total

    def __len__(self) -> int:
        return len(self.intervals)

    def __iter__(self) -> Iterator[Interval]:
        return iter(self.intervals)

    def __bool__(self) -> bool:
        return bool(self.intervals)

    def __contains__(self, x) -> bool:
        ivs = self.intervals
        lo_i, hi_i = 0, len(ivs)
        while lo_i < hi_i:
            mid = (lo_i + hi_i) // 2
            if ivs[mid][1] <= x:
                lo_i = mid + 1
            else:
                hi_i = mid
        return lo_i < len(ivs) and ivs[lo_i][0] <= x

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntervalSet):
            return NotImplemented
        return self.intervals == other.intervals

    def __hash__(self):
        return hash(self.intervals)

    def __repr__(self) -> str:
        body = ", ".join(f"[{format_exact(lo)}, {format_exact(hi)})" for lo, hi in self.intervals)
        return f"IntervalSet({body})"

    # -- set algebra --------------------------------------------------------
    def union(self, *others: IntervalSet) -> IntervalSet:
        pieces = list(self.intervals)
        for o in others:
            pieces.extend(o.intervals)
        return IntervalSet(pieces)

    __or__ = union

    def intersection(self, other: IntervalSet) -> IntervalSet:
        out = []
        a, b = self.intervals, other.intervals
        i = j = 0
        while i < len(a) and j < len(b):
            lo = max(a[i][0], b[j][0])
            hi = min(a[i][1], b[j][1])
            if lo < hi:
                out.append((lo, hi))
            if a[i][1] < b[j][1]:
                i += 1
            else:
                j += 1
        return IntervalSet(out, _normalized=True)

    __and__ = intersection

    def difference(self, other: IntervalSet) -> IntervalSet:
        out = []
        b = other.intervals
        j = 0
        for lo, hi in self.intervals:
            while j < len(b) and b[j][1] <= lo:
                j += 1
            k = j
            cur = lo
            while k < len(b) and b[k][0] < hi:
                if b[k][0] > cur:
                    out.append((cur, b[k][0]))
                cur = max(cur, b[k][1])
                k += 1
            if cur < hi:
                out.append((cur, hi))
        return IntervalSet(out, _normalized=True)

    __sub__ = difference

    def issubset(self, other: IntervalSet) -> bool:
        return not (self - other)

    __le__ = issubset

    def isdisjoint(self, other: IntervalSet) -> bool:
        return not (self & other)

    def translate(self, t) -> IntervalSet:
        return IntervalSet(((lo + t, hi + t) for lo, hi in self.intervals), _normalized=True)

    def clip(self, lo, hi) -> IntervalSet:
        return self & IntervalSet.interval(lo, hi)

    # -- serialization ------------------------------------------------------
    def to_json(self) -> list[list[str]]:
        return [[format_exact(lo), format_exact(hi)] for lo, hi in self.intervals]

    @classmethod
    def from_json(cls, data) -> IntervalSet:
        if isinstance(data, str):
            data = json.loads(data)
        return cls((to_exact(parse_exact(lo)), to_exact(parse_exact(hi))) for lo, hi in data)
