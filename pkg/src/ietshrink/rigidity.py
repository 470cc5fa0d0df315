"""Rigidity towers and the rigid target sequence built from them.

A tower (J, N) has disjoint continuous floors J, TJ, ..., T^(N-1) J that
nearly cover the domain, with T^N J nearly equal to J. Candidates are the
Rauzy-Veech bases I_j^(n) with height N = |C_j(M(T, n))|; on such a base
T^N is the induced map, a single translation.

Rotations with large partial quotients need towers of height 1e8 and more,
far beyond step-by-step pushing. For rational rotations ``verify_tower``
therefore also has an arithmetic route: every condition becomes a first
visit of an arithmetic progression mod Q to an arc.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InvalidParams, TowerNotFoundError
from .iet import Iet
from .intervals import IntervalSet
from .numerics import floor, sort_exact, to_exact
from .rauzy import column_sums, rv_walk
from .rotations import ball_union_measure, first_return_to_arc, gap_multiplicities
from .targets import Rigid, hit_union


@dataclass(frozen=True)
class RigidityTower:
    J: tuple  # (lo, hi)
    N: int
    cover: object  # measure of the union of T^n J, 1 <= n <= N
    overlap: object  # lambda(T^N J & J) / lambda(J)
    eps: Fraction
    depth: int = 0
    column: int = 1
    shift: object = 0  # T^N x - x for x in J

    @property
    def length(self):
        return self.J[1] - self.J[0]

    def to_json(self) -> dict:
        from .numerics import format_exact

        return {
            "J": [format_exact(self.J[0]), format_exact(self.J[1])],
            "N": self.N,
            "cover": format_exact(self.cover),
            "overlap": format_exact(self.overlap),
            "eps": format_exact(self.eps),
            "depth": self.depth,
            "column": self.column,
        }


@dataclass(frozen=True)
class TowerCheck:
    disjoint: bool
    continuous: bool
    cover: object
    overlap: object
    method: str

    def holds(self, eps, total=1) -> bool:
        return (
            self.disjoint
            and self.continuous
            and self.cover > (1 - eps) * total
            and self.overlap > 1 - eps
        )


def _is_rotation(T: Iet) -> bool:
    return T.d == 2 and T.perm == (2, 1)


def find_tower(
    T: Iet, eps, n_max: int, min_height: int = 1, push_limit: int = 100_000
) -> RigidityTower | None:
    """First Rauzy-Veech base, in depth then column order, whose tower meets
    the cover and overlap thresholds; re-verified before it is returned."""
    eps = to_exact(eps)
    if not 0 < eps < 1:
        raise InvalidParams("need 0 < eps < 1")
    if T.d < 2:
        raise InvalidParams("need at least two intervals")
    for rec in rv_walk(T, n_max):
        S = rec.induced
        sums = column_sums(rec.matrix)
        for j in range(1, S.d + 1):
            N = sums[j - 1]
            if N < min_height:
                continue
            lo, hi = S.breakpoints[j - 1], S.breakpoints[j]
            length = hi - lo
            cover = N * length
            shift = S.shifts[j - 1]
            overlap = max(length - abs(shift), 0) / length
            if cover > (1 - eps) * T.total and overlap > 1 - eps:
                tw = RigidityTower((lo, hi), N, cover, overlap, eps, rec.depth, j, shift)
                check = verify_tower(T, tw, push_limit)
                if not check.holds(eps, T.total):
                    raise AssertionError(f"tower at depth {rec.depth} fails re-verification: {check}")
                return tw
    return None


# -- independent verification -------------------------------------------------------
def verify_tower(T: Iet, tower: RigidityTower, push_limit: int = 100_000) -> TowerCheck:
    """Recompute the four tower conditions without the induction data."""
    if tower.N <= push_limit:
        return _verify_push(T, tower)
    if _is_rotation(T) and all(isinstance(v, Fraction) for v in T.lengths):
        return _verify_arithmetic(T, tower)
    raise InvalidParams(f"tower height {tower.N} exceeds push_limit and T is not a rational rotation")


def _verify_push(T: Iet, tower: RigidityTower) -> TowerCheck:
    lo, hi = tower.J
    floors = []
    continuous = True
    for _ in range(tower.N):
        floors.append((lo, hi))
        if not T.is_continuous_on(lo, hi):
            continuous = False
            break
        img = T.image_interval(lo, hi).intervals
        (lo, hi), = img
    if not continuous:
        return TowerCheck(False, False, Fraction(0), Fraction(0), "push")
    top = (lo, hi)
    ordered = sort_exact(floors, key=lambda p: p[0])
    disjoint = all(a[1] <= b[0] for a, b in zip(ordered, ordered[1:]))
    cover = IntervalSet(floors[1:] + [top]).measure
    J = IntervalSet([tower.J])
    overlap = (IntervalSet([top]) & J).measure / J.measure
    return TowerCheck(disjoint, continuous, cover, overlap, "push")


def _verify_arithmetic(T: Iet, tower: RigidityTower) -> TowerCheck:
    total = T.total
    alpha = T.lengths[1] / total
    lo, hi = tower.J[0] / total, tower.J[1] / total
    L, N = hi - lo, tower.N
    # floors J + n alpha, 0 <= n < N, pairwise disjoint iff no m in [1, N)
    # puts {m alpha} within L of 0
    if N == 1:
        disjoint = True
    elif 2 * L > 1:
        disjoint = False
    else:
        m = first_return_to_arc(alpha, Fraction(0), 1 - L, L, start=1)
        disjoint = m is None or m >= N
    # T jumps at 1 - alpha; the floor at step n straddles it iff
    # {lo + (n+1) alpha} lies in (1 - L, 1)
    k = first_return_to_arc(alpha, lo, 1 - L, Fraction(1), start=1)
    continuous = k is None or k > N
    gaps = gap_multiplicities(alpha, N)
    cover = ball_union_measure(gaps, L / 2) * total
    top = lo + N * alpha
    top = top - floor(top)
    overlap = max(L - abs(top - lo), 0) / L
    return TowerCheck(disjoint, continuous, cover, overlap, "arithmetic")


# -- good set and sampled points ----------------------------------------------------
def good_base(tower: RigidityTower, k: int) -> tuple:
    """J & T^-N J & ... & T^-kN J, an interval since T^N is a translation on J."""
    lo, hi = tower.J
    s = tower.shift
    if s >= 0:
        hi = hi - k * s
    else:
        lo = lo - k * s
    return (lo, hi) if lo < hi else (lo, lo)


def good_set_measure(tower: RigidityTower, k: int):
    lo, hi = good_base(tower, k)
    return tower.N * (hi - lo)


def _advance(T: Iet, x, n: int):
    if _is_rotation(T) and n > 10_000:
        y = x + n * T.lengths[1]
        return y - floor(y / T.total) * T.total
    return T.iterate(x, n)


def sample_good_points(T: Iet, tower: RigidityTower, k: int, count: int = 5) -> list:
    """Points T^n y with y spread over the good base and n spread over [1, N]."""
    lo, hi = good_base(tower, k)
    if lo == hi:
        return []
    out = []
    for t in range(count):
        y = lo + (hi - lo) * Fraction(2 * t + 1, 2 * count)
        n = 1 + (tower.N - 1) * t // max(count - 1, 1)
        out.append(_advance(T, y, n))
    return out


def displacement_ok(T: Iet, tower: RigidityTower, x, j: int, k_max: int) -> bool:
    """|T^(kN) x - x| < k / (N 3^j) for 1 <= k <= k_max, by direct orbit."""
    for k in range(1, k_max + 1):
        y = _advance(T, x, k * tower.N)
        if not abs(y - x) < Fraction(k, tower.N * 3**j):
            return False
    return True


# -- the rigid sequence --------------------------------------------------------------
def block_bound(j: int) -> Fraction:
    """N_j / (2^j N_j) + 2^j N_j / (3^j N_j)."""
    return Fraction(1, 2**j) + Fraction(2**j, 3**j)


def block_range(N: list, j: int) -> tuple[int, int]:
    prev = 1 if j == 1 else N[j - 2]
    return 2 ** (j - 1) * prev, 2**j * N[j - 1]


def block_measure(T: Iet, x, N: list, j: int, metric: str = "auto"):
    """Measure of the union of B(T^i x, 1/(2^j N_j)) over the half-open block
    2^(j-1) N_(j-1) <= i < 2^j N_j.

    ``metric="auto"`` on a rational rotation uses the three-gap count on the
    circle, an upper bound for the truncated measure and exact in circle
    mode; otherwise the union is built explicitly.
    """
    start, stop = block_range(N, j)
    if metric == "auto":
        if _is_rotation(T) and T.total == 1 and isinstance(T.lengths[1], Fraction):
            return ball_union_measure(gap_multiplicities(T.lengths[1], stop - start), Fraction(1, 2**j * N[j - 1]))
        metric = "interval"
    return hit_union(T, x, Rigid(tuple(N)), start, stop - 1, metric).measure


@dataclass
class BlockReport:
    j: int
    N: int
    measure: object
    bound: Fraction
    good_measure: object
    good_floor: Fraction
    x: object = None
    displacement_ok: bool = True

    @property
    def below_bound(self) -> bool:
        return self.measure < self.bound


@dataclass
class RigidResult:
    N: list
    towers: list
    sequence: Rigid
    blocks: list = field(default_factory=list)


def rigid_sequence(
    T: Iet, j_max: int, n_search: int, x=None, metric: str = "auto", push_limit: int = 100_000
) -> RigidResult:
    """Towers at eps_j = 3^-j with strictly increasing N_j, the Rigid
    sequence they define, and per-block measures against the bound."""
    if j_max < 1:
        raise InvalidParams("need j_max >= 1")
    Ns: list[int] = []
    towers: list[RigidityTower] = []
    for j in range(1, j_max + 1):
        tw = find_tower(T, Fraction(1, 3**j), n_search, min_height=(Ns[-1] + 1 if Ns else 1), push_limit=push_limit)
        if tw is None:
            raise TowerNotFoundError(f"no tower for eps = 3^-{j} within {n_search} steps", j=j)
        towers.append(tw)
        Ns.append(tw.N)
    result = RigidResult(Ns, towers, Rigid(tuple(Ns)))
    for j, tw in enumerate(towers, start=1):
        k = 2**j
        pts = sample_good_points(T, tw, k, count=3)
        xj = x if x is not None else (pts[0] if pts else Fraction(0))
        disp = all(displacement_ok(T, tw, p, j, k) for p in pts)
        result.blocks.append(
            BlockReport(
                j,
                tw.N,
                block_measure(T, xj, Ns, j, metric),
                block_bound(j),
                good_set_measure(tw, k),
                1 - Fraction(k + 1, 3**j),
                xj,
                disp,
            )
        )
    return result
