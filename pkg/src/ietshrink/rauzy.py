"""Rauzy-Veech induction: steps, matrices, paths, towers and Rauzy classes.

Step ``a`` happens when the last interval is shorter than the interval that
lands last (delta_+ > delta_-); step ``b`` in the opposite case. Matrices act
on length vectors from the left: ``L(T) = M(T, n) @ L(R^n T)``.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import (
    CapExceededError,
    DegreeTooHighError,
    InvalidParams,
    NotALoopError,
    NotInGeneralPositionError,
    NotPositiveError,
    ReducibleError,
    ZeroColumnError,
)
from .iet import Iet, Permutation, check_permutation, is_irreducible
from .intervals import IntervalSet
from .numerics import quadratic, to_exact

Matrix = tuple  # tuple of row tuples of ints


# -- small integer matrix helpers ------------------------------------------------
def identity(d: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(d)) for i in range(d))


def matmul(A: Matrix, B: Matrix) -> Matrix:
    Bt = list(zip(*B))
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in Bt) for row in A)


def matvec(A: Matrix, v: Sequence):
    out = []
    for row in A:
        s = Fraction(0)
        for a, x in zip(row, v):
            if a:
                s = s + a * x
        out.append(s)
    return tuple(out)


def column_sums(M: Matrix) -> tuple:
    return tuple(sum(col) for col in zip(*M))


def determinant(M: Matrix) -> int:
    """Exact determinant by fraction-free elimination (Bareiss)."""
    A = [list(r) for r in M]
    n = len(A)
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for r in range(k + 1, n):
                if A[r][k]:
                    A[k], A[r] = A[r], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[-1][-1]


def is_positive(M: Matrix) -> bool:
    return all(x > 0 for row in M for x in row)


# -- single steps ---------------------------------------------------------------
def permutation_after(perm: Sequence[int], letter: str) -> Permutation:
    """Permutation of R(T) after a step ``letter`` from ``perm``."""
    d = len(perm)
    m = perm.index(d) + 1  # pi^{-1}(d), 1-based
    if letter == "a":
        out = []
        for j in range(1, d + 1):
            if j <= m:
                out.append(perm[j - 1])
            elif j == m + 1:
                out.append(perm[d - 1])
            else:
                out.append(perm[j - 2])
        return tuple(out)
    if letter == "b":
        pd = perm[d - 1]
        out = []
        for p in perm:
            if p <= pd:
                out.append(p)
            elif p < d:
                out.append(p + 1)
            else:
                out.append(pd + 1)
        return tuple(out)
    raise InvalidParams(f"unknown step {letter!r}")


def step_matrix(perm: Sequence[int], letter: str) -> Matrix:
    """M(T, 1) for a step ``letter`` taken from permutation ``perm``."""
    d = len(perm)
    m = perm.index(d) + 1
    M = [[int(i == j) for j in range(1, d + 1)] for i in range(1, d + 1)]
    if letter == "a":
        # columns right of m shift by one; the last length reappears in column m+1
        for i in range(1, d + 1):
            for j in range(m + 1, d + 1):
                M[i - 1][j - 1] = int(i == j - 1) if i != d else 0
        M[d - 1][m] = 1
    elif letter == "b":
        M[d - 1][m - 1] = 1
    else:
        raise InvalidParams(f"unknown step {letter!r}")
    return tuple(tuple(r) for r in M)


def rv_step(T: Iet) -> tuple[str, Iet, Matrix]:
    """One step of Rauzy-Veech induction: (letter, R(T), M(T, 1))."""
    perm = T.perm
    if not is_irreducible(perm):
        raise ReducibleError(f"permutation {perm} is reducible")
    d = T.d
    m = perm.index(d) + 1
    l_last, l_win = T.lengths[d - 1], T.lengths[m - 1]
    if l_last == l_win:
        raise NotInGeneralPositionError("delta_+ == delta_-: induction undefined")
    L = list(T.lengths)
    if l_last < l_win:
        letter = "a"
        new = L[: m - 1] + [l_win - l_last, l_last] + L[m : d - 1]
    else:
        letter = "b"
        new = L[: d - 1] + [l_last - l_win]
    return letter, Iet(tuple(new), permutation_after(perm, letter)), step_matrix(perm, letter)


def delta_plus(T: Iet):
    """Rightmost discontinuity of T."""
    return T.breakpoints[-2]


def delta_minus(T: Iet):
    """Rightmost discontinuity of T^-1, read off the image slots."""
    return T.image_breakpoints[-2]


# -- paths ----------------------------------------------------------------------
@dataclass(frozen=True)
class RvRecord:
    steps: str
    matrix: Matrix
    induced: Iet

    @property
    def depth(self) -> int:
        return len(self.steps)

    @property
    def interval_length(self):
        return self.induced.total

    @property
    def column_sums(self) -> tuple:
        return column_sums(self.matrix)

    def to_json(self) -> dict:
        return {
            "steps": self.steps,
            "matrix": [list(r) for r in self.matrix],
            "induced": self.induced.to_json(),
        }


def rv_walk(T: Iet, max_depth: int | None = None) -> Iterator[RvRecord]:
    """Yield the records for depths 0, 1, 2, ... until induction stops.

    Stops quietly when the next step is undefined (delta_+ == delta_-), as
    happens for every rational IET eventually.
    """
    rec = RvRecord("", identity(T.d), T)
    yield rec
    depth = 0
    while max_depth is None or depth < max_depth:
        try:
            letter, S, M1 = rv_step(rec.induced)
        except NotInGeneralPositionError:
            return
        rec = RvRecord(rec.steps + letter, matmul(rec.matrix, M1), S)
        depth += 1
        yield rec


def rv_path(T: Iet, n: int) -> RvRecord:
    """Accumulated record after ``n`` steps."""
    if n < 0:
        raise InvalidParams("n must be >= 0")
    rec = RvRecord("", identity(T.d), T)
    for depth in range(n):
        try:
            letter, S, M1 = rv_step(rec.induced)
        except NotInGeneralPositionError as exc:
            raise NotInGeneralPositionError(str(exc), depth=depth) from None
        rec = RvRecord(rec.steps + letter, matmul(rec.matrix, M1), S)
    return rec


# -- towers -------------------------------------------------------------------------
@dataclass(frozen=True)
class Tower:
    base: tuple  # (lo, hi) of I_j^(n)
    height: int
    floors: tuple  # T^i(base) for 0 <= i < height, each (lo, hi)

    @property
    def union(self) -> IntervalSet:
        return IntervalSet(self.floors)


def tower(T: Iet, n: int, j: int, record: RvRecord | None = None) -> Tower:
    """Rokhlin tower over I_j^(n) (1-based ``j``), floors by direct pushing."""
    rec = record if record is not None else rv_path(T, n)
    S = rec.induced
    if not 1 <= j <= S.d:
        raise InvalidParams(f"column index {j} out of range")
    base = (S.breakpoints[j - 1], S.breakpoints[j])
    height = column_sums(rec.matrix)[j - 1]
    floors = [base]
    for _ in range(height - 1):
        lo, hi = floors[-1]
        if not T.is_continuous_on(lo, hi):
            raise AssertionError("T is not continuous on a tower floor")
        s = T.shifts[T.interval_index(lo)]
        floors.append((lo + s, hi + s))
    return Tower(base, height, tuple(floors))


# -- balance and classes ----------------------------------------------------------------
def is_balanced(M: Matrix, nu) -> bool:
    """All column-sum ratios strictly between 1/nu and nu."""
    nu = to_exact(nu)
    if nu <= 1:
        raise InvalidParams("nu must exceed 1")
    sums = column_sums(M)
    if any(s <= 0 for s in sums):
        raise ZeroColumnError("matrix has a zero column")
    return max(sums) < nu * min(sums)


def rauzy_class(perm: Sequence[int]) -> set:
    """All permutations reachable from ``perm`` by steps a and b."""
    perm = check_permutation(perm)
    if not is_irreducible(perm):
        raise ReducibleError(f"permutation {perm} is reducible")
    seen = {perm}
    queue = deque([perm])
    while queue:
        p = queue.popleft()
        for letter in "ab":
            q = permutation_after(p, letter)
            if q not in seen:
                seen.add(q)
                queue.append(q)
    return seen


# -- prescribed induction ---------------------------------------------------------------
def iet_from_column(T: Iet, n: int, k: int, i: int) -> Iet:
    """S_{L, pi(T)} with L the normalized i-th column of M(T, n + k).

    Requires M(R^n T, k) positive; S then follows T's first n steps.
    """
    head = rv_path(T, n)
    tail = rv_path(head.induced, k)
    if not is_positive(tail.matrix):
        raise NotPositiveError(f"M(R^{n} T, {k}) has a zero entry")
    M = matmul(head.matrix, tail.matrix)
    if not 1 <= i <= T.d:
        raise InvalidParams(f"column index {i} out of range")
    col = [row[i - 1] for row in M]
    s = sum(col)
    return Iet(tuple(Fraction(c, s) for c in col), T.perm)


def smallest_positive_k(T: Iet, n: int, k_max: int = 200) -> int | None:
    """Least k with M(R^n T, k) positive, or None within ``k_max``."""
    head = rv_path(T, n)
    for rec in rv_walk(head.induced, k_max):
        if rec.depth and is_positive(rec.matrix):
            return rec.depth
    return None


# -- i-good --------------------------------------------------------------------------
def _orbit_separated(S: Iet, K: int, delta) -> bool:
    """Every x: the points S x, ..., S^K x are pairwise >= delta apart.

    On each continuity piece of S^K those points are x plus fixed
    translations, so checking piece left endpoints is exhaustive.
    """
    from .iet import discontinuities

    starts = [Fraction(0)] + discontinuities(S, K) if S.d > 1 else [Fraction(0)]
    for p in starts:
        orb = S.orbit(p, 1, K + 1)
        orb.sort()
        for a, b in zip(orb, orb[1:]):
            if b - a < delta:
                return False
    return True


def i_good_parameters(nu, e, d: int, interval_length):
    """(K, delta) of the separation clause: K = ceil(20 nu^2 d)."""
    nu, e = to_exact(nu), to_exact(e)
    scale = 20 * nu * nu * d
    return math.ceil(scale), e * interval_length / scale


def is_i_good(T: Iet, nu, e, i: int, max_depth: int = 10_000) -> int | None:
    """First induction depth n_0 witnessing that T is i-good, or None."""
    nu, e = to_exact(nu), to_exact(e)
    if nu <= 1 or e <= 0 or i < 0:
        raise InvalidParams("need nu > 1, e > 0, i >= 0")
    lo, hi = 2**i, 2 ** (i + 1)
    rec = RvRecord("", identity(T.d), T)
    for depth in range(max_depth + 1):
        sums = column_sums(rec.matrix)
        cmax = max(sums)
        if cmax > hi:
            return None
        if cmax >= lo and is_balanced(rec.matrix, nu):
            K, delta = i_good_parameters(nu, e, T.d, rec.interval_length)
            if _orbit_separated(rec.induced, K, delta):
                return depth
        try:
            letter, S, M1 = rv_step(rec.induced)
        except NotInGeneralPositionError as exc:
            raise NotInGeneralPositionError(str(exc), depth=depth) from None
        rec = RvRecord(rec.steps + letter, matmul(rec.matrix, M1), S)
    return None


# -- pseudo-Anosov IETs -------------------------------------------------------------------
def loop_matrix(perm: Sequence[int], loop: str) -> tuple[Matrix, Permutation]:
    p = check_permutation(perm)
    M = identity(len(p))
    for letter in loop:
        M = matmul(M, step_matrix(p, letter))
        p = permutation_after(p, letter)
    return M, p


def _nullvector(A: list[list]) -> list:
    """One nonzero vector of the kernel of a square matrix over an exact field."""
    A = [list(r) for r in A]
    n = len(A)
    pivots = []
    row = 0
    for col in range(n):
        piv = next((r for r in range(row, n) if A[r][col] != 0), None)
        if piv is None:
            continue
        A[row], A[piv] = A[piv], A[row]
        inv = 1 / A[row][col]
        A[row] = [x * inv for x in A[row]]
        for r in range(n):
            if r != row and A[r][col] != 0:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[row])]
        pivots.append(col)
        row += 1
    free = next(c for c in range(n) if c not in pivots)
    v = [Fraction(0)] * n
    v[free] = Fraction(1)
    for r, c in enumerate(pivots):
        v[c] = -A[r][free]
    return v


def perron_root(M: Matrix):
    """Exact Perron root of a positive integer matrix (degree <= 2)."""
    import sympy

    lam = sympy.Symbol("lam")
    poly = sympy.Matrix(M).charpoly(lam)
    numeric = max(abs(complex(r)) for r in sympy.Poly(poly.as_expr(), lam).nroots(n=30))
    best = None
    for factor, _ in sympy.factor_list(poly.as_expr())[1]:
        fp = sympy.Poly(factor, lam)
        roots = [complex(r) for r in fp.nroots(n=30)]
        gap = min(abs(r - numeric) for r in roots)
        if best is None or gap < best[0]:
            best = (gap, fp)
    fp = best[1]
    coeffs = [int(c) for c in fp.all_coeffs()]
    if fp.degree() == 1:
        a, b = coeffs
        return Fraction(-b, a)
    if fp.degree() == 2:
        a, b, c = coeffs
        disc = b * b - 4 * a * c
        r = math.isqrt(disc)
        if r * r == disc:
            return max(Fraction(-b + r, 2 * a), Fraction(-b - r, 2 * a))
        if a < 0:
            a, b = -a, -b
        return quadratic(-b, 1, 2 * a, disc)
    raise DegreeTooHighError(f"Perron root has degree {fp.degree()}")


def perron_iet(perm: Sequence[int], loop: str) -> Iet:
    """Unit-length IET fixed up to rescaling by the induction loop ``loop``."""
    loop = "".join(loop)
    if not loop:
        raise NotALoopError("empty loop")
    perm = check_permutation(perm)
    if not is_irreducible(perm):
        raise ReducibleError(f"permutation {perm} is reducible")
    M, end = loop_matrix(perm, loop)
    if end != perm:
        raise NotALoopError(f"loop {loop!r} ends at {end}, not {perm}")
    if not is_positive(M):
        raise NotPositiveError("loop matrix is not positive")
    lam = perron_root(M)
    d = len(perm)
    A = [[M[i][j] - (lam if i == j else 0) for j in range(d)] for i in range(d)]
    v = _nullvector(A)
    s = Fraction(0)
    for x in v:
        s = s + x
    return Iet(tuple(x / s for x in v), perm)


# -- column sums as return times ---------------------------------------------------------
def first_return(T: Iet, x, u, v, cap: int = 10**7) -> int:
    """Least r >= 1 with T^r x in [u, v), by direct iteration."""
    y, r = T.apply(x), 1
    while not u <= y < v:
        if r >= cap:
            raise CapExceededError(f"{x} did not return within {cap} steps")
        y, r = T.apply(y), r + 1
    return r


def column_sum_identity(T: Iet, record: RvRecord) -> bool:
    """Each |C_j(M(T, n))| equals the return time to [0, lambda^(n)) of the
    left endpoint and the midpoint of I_j^(n), iterated directly under T."""
    S = record.induced
    v = S.total
    for j, h in enumerate(column_sums(record.matrix)):
        lo, hi = S.breakpoints[j], S.breakpoints[j + 1]
        for x in (lo, (lo + hi) / 2):
            try:
                if first_return(T, x, 0, v, cap=h) != h:
                    return False
            except CapExceededError:
                return False
    return True
