"""Exact ordered-field arithmetic: rationals and real quadratic numbers.

Rationals are plain :class:`fractions.Fraction` values. Quadratic values
``(a + b*sqrt(D))/c`` are :class:`Quadratic` instances; they mix freely with
``int`` and ``Fraction`` but never with a Quadratic over a different ``D``.

Arithmetic between quadratics whose irrational part cancels returns a
``Fraction``, so rational results always come back in the cheapest form.

Fast path for orbits: a rational IET whose lengths share the common
denominator ``Q`` maps multiples of ``1/Q`` to multiples of ``1/Q``, so an
orbit can be run on plain integers (machine-word sized whenever ``Q`` is).
:mod:`ietshrink.iet` does exactly that; nothing here needs to know.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational

from .errors import MixedFieldError

__all__ = [
    "Quadratic",
    "quadratic",
    "sqrt",
    "to_exact",
    "compare",
    "sign",
    "floor",
    "ceil",
    "field_of",
    "common_field",
    "format_exact",
    "parse_exact",
    "split_exact",
    "log_bounds",
    "log2_bounds",
    "to_dyadic",
    "sort_exact",
]


def _squarefree_split(n: int) -> tuple[int, int]:
    """Return (s, f) with n == s*s*f and f squarefree (trial division)."""
    s, f = 1, 1
    p = 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
            s *= p
        if n % p == 0:
            n //= p
            f *= p
        p += 1
    return s, f * n


def _isqrt_signed_floor(b: int, D: int) -> int:
    """floor(b*sqrt(D)) for squarefree non-square D."""
    r = math.isqrt(b * b * D)
    return r if b >= 0 else -r - 1


class Quadratic:
    """The real number ``(a + b*sqrt(D)) / c``.

    Stored with ``c > 0``, ``gcd(a, b, c) == 1`` and ``D`` squarefree, not a
    perfect square. Instances are immutable and hashable.
    """

    __slots__ = ("a", "b", "c", "D")

    def __init__(self, a: int, b: int, c: int, D: int):
        if c == 0:
            raise ZeroDivisionError("zero denominator")
        if D <= 1:
            raise ValueError(f"D must be a squarefree integer > 1, got {D}")
        s, f = _squarefree_split(D)
        if f == 1:
            raise ValueError(f"D={D} is a perfect square")
        b *= s
        D = f
        if c < 0:
            a, b, c = -a, -b, -c
        g = math.gcd(math.gcd(a, b), c)
        object.__setattr__(self, "a", a // g)
        object.__setattr__(self, "b", b // g)
        object.__setattr__(self, "c", c // g)
        object.__setattr__(self, "D", D)

    def __setattr__(self, name, value):
        raise AttributeError("Quadratic is immutable")

    def __reduce__(self):
        return (Quadratic, (self.a, self.b, self.c, self.D))

    # -- coercion -----------------------------------------------------------
    def _parts(self, other):
        """(a, b, c) of ``other`` viewed in this field."""
        if isinstance(other, Quadratic):
            if other.D != self.D:
                raise MixedFieldError(f"Q(sqrt {self.D}) vs Q(sqrt {other.D})")
            return other.a, other.b, other.c
        if isinstance(other, int):
            return other, 0, 1
        if isinstance(other, Rational):
            return other.numerator, 0, other.denominator
        return None

    def conjugate(self) -> Quadratic:
        return Quadratic(self.a, -self.b, self.c, self.D)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        a, b, c = p
        return quadratic(self.a * c + a * self.c, self.b * c + b * self.c, self.c * c, self.D)

    __radd__ = __add__

    def __neg__(self):
        return Quadratic(-self.a, -self.b, self.c, self.D)

    def __pos__(self):
        return self

    def __sub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        a, b, c = p
        return quadratic(self.a * c - a * self.c, self.b * c - b * self.c, self.c * c, self.D)

    def __rsub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        a, b, c = p
        return quadratic(a * self.c - self.a * c, b * self.c - self.b * c, self.c * c, self.D)

    def __mul__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        a, b, c = p
        D = self.D
        return quadratic(self.a * a + self.b * b * D, self.a * b + self.b * a, self.c * c, D)

    __rmul__ = __mul__

    def _inverse_parts(self):
        norm = self.a * self.a - self.b * self.b * self.D
        if norm == 0:
            raise ZeroDivisionError("division by zero")
        # c / (a + b r) = c (a - b r) / norm
        return self.c * self.a, -self.c * self.b, norm

    def __truediv__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        a, b, c = p
        if b == 0:
            if a == 0:
                raise ZeroDivisionError("division by zero")
            return quadratic(self.a * c, self.b * c, self.c * a, self.D)
        inv = Quadratic(a, b, c, self.D)._inverse_parts()
        return self * quadratic(*inv, self.D)

    def __rtruediv__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return quadratic(*p, self.D) * quadratic(*self._inverse_parts(), self.D)

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return (1 / self) ** (-n)
        result, base = Fraction(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- order --------------------------------------------------------------
    def sign(self) -> int:
        return _sign_ab(self.a, self.b, self.D)

    def _cmp(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        a, b, c = p
        return _sign_ab(self.a * c - a * self.c, self.b * c - b * self.c, self.D)

    def __eq__(self, other):
        r = self._cmp(other)
        return r if r is NotImplemented else r == 0

    def __lt__(self, other):
        r = self._cmp(other)
        return r if r is NotImplemented else r < 0

    def __le__(self, other):
        r = self._cmp(other)
        return r if r is NotImplemented else r <= 0

    def __gt__(self, other):
        r = self._cmp(other)
        return r if r is NotImplemented else r > 0

    def __ge__(self, other):
        r = self._cmp(other)
        return r if r is NotImplemented else r >= 0

    def __hash__(self):
        if self.b == 0:
            return hash(Fraction(self.a, self.c))
        return hash((self.a, self.b, self.c, self.D))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __floor__(self):
        return (self.a + _isqrt_signed_floor(self.b, self.D)) // self.c

    def __ceil__(self):
        return -math.floor(-self)

    def approx(self) -> float:
        """Fast float approximation (not exact; used only as a sort hint)."""
        if abs(self.a) < 1 << 50 and abs(self.b) < 1 << 24 and self.c < 1 << 50:
            return (self.a + self.b * math.sqrt(self.D)) / self.c
        return float(self)

    def __float__(self):
        S = 1 << 64
        root = math.isqrt(self.b * self.b * self.D * S * S)
        if self.b < 0:
            root = -root
        return float(Fraction(self.a * S + root, self.c * S))

    def __repr__(self):
        return f"Quadratic({self.a}, {self.b}, {self.c}, {self.D})"

    def __str__(self):
        return format_exact(self)


def _sign_ab(a: int, b: int, D: int) -> int:
    """Sign of a + b*sqrt(D), certified via the conjugate norm a^2 - b^2 D."""
    if b == 0:
        return (a > 0) - (a < 0)
    if a == 0:
        return 1 if b > 0 else -1
    if a > 0 and b > 0:
        return 1
    if a < 0 and b < 0:
        return -1
    norm = a * a - b * b * D
    # norm != 0 because D is not a perfect square
    if a > 0:
        return 1 if norm > 0 else -1
    return -1 if norm > 0 else 1


def quadratic(a: int, b: int, c: int, D: int):
    """Build ``(a + b sqrt D)/c``, returning a Fraction when ``b == 0``."""
    if b == 0:
        return Fraction(a, c)
    return Quadratic(a, b, c, D)


def sqrt(n) -> Quadratic | Fraction:
    """Exact square root of a non-negative rational."""
    n = Fraction(n)
    if n < 0:
        raise ValueError("negative radicand")
    num, den = n.numerator, n.denominator
    # sqrt(p/q) = sqrt(p q)/q
    pq = num * den
    r = math.isqrt(pq)
    if r * r == pq:
        return Fraction(r, den)
    return Quadratic(0, 1, den, pq)


def to_exact(x):
    """Coerce ints, Fractions, strings and Quadratics to an exact value."""
    if isinstance(x, (Fraction, Quadratic)):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_exact(x)
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    raise TypeError(f"cannot represent {x!r} exactly (floats are not accepted)")


def field_of(x) -> int | None:
    """D of the quadratic field holding ``x``; None for rationals."""
    if isinstance(x, Quadratic) and x.b != 0:
        return x.D
    return None


def common_field(values) -> int | None:
    """The single D shared by ``values`` (None if all rational)."""
    D = None
    for v in values:
        f = field_of(v)
        if f is None:
            continue
        if D is None:
            D = f
        elif f != D:
            raise MixedFieldError(f"Q(sqrt {D}) vs Q(sqrt {f})")
    return D


def compare(a, b) -> int:
    """-1, 0 or 1 according to the sign of ``a - b``."""
    a, b = to_exact(a), to_exact(b)
    if isinstance(a, Quadratic):
        return a._cmp(b)
    if isinstance(b, Quadratic):
        return -b._cmp(a)
    return (a > b) - (a < b)


def sign(x) -> int:
    return compare(x, 0)


def floor(x) -> int:
    return math.floor(x)


def ceil(x) -> int:
    return math.ceil(x)


def _approx(x) -> float:
    if isinstance(x, Quadratic):
        return x.approx()
    return float(x)


def sort_exact(items: list, key=None) -> list:
    """Sort exact values (or items keyed by them) without float error.

    Sorts by a float hint first, then repairs any local disorder with an
    exact insertion pass; for nearly distinct floats that pass is linear.
    """
    key = key or (lambda v: v)
    decorated = sorted(((_approx(key(it)), k, it) for k, it in enumerate(items)), key=lambda t: (t[0], t[1]))
    out = [it for _, _, it in decorated]
    keys = [key(it) for it in out]
    for i in range(1, len(out)):
        if keys[i] < keys[i - 1]:
            it, kv = out[i], keys[i]
            j = i - 1
            while j >= 0 and kv < keys[j]:
                out[j + 1], keys[j + 1] = out[j], keys[j]
                j -= 1
            out[j + 1], keys[j + 1] = it, kv
    return out


# -- text ---------------------------------------------------------------------
_QUAD_RE = re.compile(
    r"^\(\s*([+-]?\d+)\s*([+-])\s*(\d+)\s*\*\s*sqrt\(\s*(\d+)\s*\)\s*\)\s*/\s*(\d+)$"
)
_RAT_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def format_exact(x) -> str:
    """Bit-exact text: ``"p/q"`` or ``"(a+b*sqrt(D))/c"``."""
    x = to_exact(x)
    if isinstance(x, Quadratic):
        op = "+" if x.b >= 0 else "-"
        return f"({x.a}{op}{abs(x.b)}*sqrt({x.D}))/{x.c}"
    return f"{x.numerator}/{x.denominator}"


def parse_exact(text: str):
    """Inverse of :func:`format_exact`; also accepts bare integers."""
    s = text.strip()
    m = _RAT_RE.match(s)
    if m:
        den = int(m.group(2)) if m.group(2) else 1
        return Fraction(int(m.group(1)), den)
    m = _QUAD_RE.match(s.replace(" ", ""))
    if m:
        a, op, b, D, c = m.groups()
        bb = int(b) if op == "+" else -int(b)
        return quadratic(int(a), bb, int(c), int(D)) if bb == 0 else Quadratic(int(a), bb, int(c), int(D))
    raise ValueError(f"not an exact number: {text!r}")


def split_exact(x) -> tuple[str, str]:
    """Numerator and denominator strings, e.g. ``("-1+1*sqrt(5)", "2")``.

    ``parse_exact(f"({num})/{den}")`` (or ``f"{num}/{den}"`` for rationals)
    recovers ``x``.
    """
    x = to_exact(x)
    if isinstance(x, Quadratic):
        op = "+" if x.b >= 0 else "-"
        return f"{x.a}{op}{abs(x.b)}*sqrt({x.D})", str(x.c)
    return str(x.numerator), str(x.denominator)


def join_exact(num: str, den: str):
    """Inverse of :func:`split_exact`."""
    if "sqrt" in num:
        return parse_exact(f"({num})/{den}")
    return Fraction(int(num), int(den))


# -- certified logarithms -----------------------------------------------------
def _atanh_bounds(z: Fraction, terms: int) -> tuple[Fraction, Fraction]:
    """Enclosure of atanh(z) for 0 <= z < 1 by a truncated odd series."""
    z2 = z * z
    s = Fraction(0)
    p = z
    for j in range(terms):
        s += p / (2 * j + 1)
        p *= z2
    # tail <= z^(2J+1) / ((2J+1)(1 - z^2))
    tail = p / ((2 * terms + 1) * (1 - z2))
    return s, s + tail


def to_dyadic(lo: Fraction, hi: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """Round an enclosure outward to multiples of 2**-bits."""
    S = 1 << bits
    return (Fraction(math.floor(lo * S), S), Fraction(math.ceil(hi * S), S))


def _ln2_bounds(terms: int) -> tuple[Fraction, Fraction]:
    lo, hi = _atanh_bounds(Fraction(1, 3), terms)
    return 2 * lo, 2 * hi


def log_bounds(x, bits: int = 64) -> tuple[Fraction, Fraction]:
    """Dyadic enclosure ``lo <= ln(x) <= hi`` for rational ``x > 0``.

    Shifts ``x`` by a power of two into ``[1, 2)`` and sums the atanh series
    with an explicit tail bound; endpoints are rounded outward to ``bits``.
    """
    x = Fraction(x)
    if x <= 0:
        raise ValueError("log of non-positive number")
    k = x.numerator.bit_length() - x.denominator.bit_length()
    m = x / Fraction(2) ** k
    while m >= 2:
        m /= 2
        k += 1
    while m < 1:
        m *= 2
        k -= 1
    terms = bits // 3 + 4
    z = (m - 1) / (m + 1)
    mlo, mhi = _atanh_bounds(z, terms)
    l2lo, l2hi = _ln2_bounds(terms)
    if k >= 0:
        lo, hi = k * l2lo + 2 * mlo, k * l2hi + 2 * mhi
    else:
        lo, hi = k * l2hi + 2 * mlo, k * l2lo + 2 * mhi
    return to_dyadic(lo, hi, bits)


def log2_bounds(x, bits: int = 64) -> tuple[Fraction, Fraction]:
    """Dyadic enclosure of log2(x) for rational ``x > 0``."""
    lo, hi = log_bounds(x, bits + 8)
    l2lo, l2hi = _ln2_bounds(bits // 3 + 4)
    qlo = lo / l2hi if lo >= 0 else lo / l2lo
    qhi = hi / l2lo if hi >= 0 else hi / l2hi
    return to_dyadic(qlo, qhi, bits)
