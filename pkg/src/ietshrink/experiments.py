"""Config-driven experiments with deterministic CSV and JSON reports."""
from __future__ import annotations

import csv
import io
import json
import platform
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

from . import __version__
from .errors import InvalidParams, PreconditionViolated
from .iet import Iet, induce, min_gap, rotation
from .intervals import IntervalSet
from .numerics import format_exact, parse_exact, split_exact, sqrt, to_exact
from .rauzy import column_sum_identity, perron_iet, rauzy_class, rv_walk
from .rigidity import rigid_sequence
from .rng import SplitMix64, sample_random_iet
from .rotations import cf_expand, from_quotients, kurzweil_exponent, rotation_iet, three_gaps
from .targets import (
    Harmonic,
    LogHarmonic,
    TargetSequence,
    check_separated_bound,
    check_separated_bound_inverse,
    discontinuity_orbits_distinct,
    hitting_exponent,
    hitting_times,
    limsup_profile,
)

KINDS = (
    "target-measure",
    "rv-path",
    "rigidity-search",
    "separation-stats",
    "hitting-time",
    "rauzy-class",
    "cf",
    "three-gap",
    "perron",
    "induce",
    "sample",
)

# quotients [2; 1, 4*3^j + 1, ...]: each large term yields one rigidity tower
DEFAULT_RIGID_QUOTIENTS = [2, 1, 13, 1, 37, 1, 109, 1, 325, 1, 973, 1, 2917, 1, 1]


class ConfigError(InvalidParams):
    pass


@dataclass
class ExperimentConfig:
    kind: str
    iet: dict | None = None
    sampler: dict | None = None  # {"d": 4, "Q": 1000, "count": 10}
    sequence: dict | None = None
    schedule: list = field(default_factory=list)  # [[N, M], ...]
    metric: str = "interval"
    seed: int = 0
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown experiment kind {self.kind!r}")
        if self.metric not in ("interval", "circle"):
            raise ConfigError(f"metric must be 'interval' or 'circle', got {self.metric!r}")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")

    @classmethod
    def from_dict(cls, data: dict) -> ExperimentConfig:
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        known = {f for f in cls.__dataclass_fields__}
        extra = sorted(set(data) - known)
        if extra:
            raise ConfigError(f"unknown config keys: {', '.join(extra)}")
        if "kind" not in data:
            raise ConfigError("config needs a 'kind'")
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> ExperimentConfig:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        return cls.from_dict(data)

    @classmethod
    def from_file(cls, path) -> ExperimentConfig:
        return cls.from_json(Path(path).read_text())

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class Report:
    kind: str
    header: tuple
    rows: list
    summary: dict
    failures: int = 0

    def csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.header)
        w.writerows(self.rows)
        return buf.getvalue()

    def write(self, out_dir) -> tuple[Path, Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        csv_path = out / f"{self.kind}.csv"
        json_path = out / f"{self.kind}.json"
        csv_path.write_text(self.csv_text())
        json_path.write_text(json.dumps(self.summary, indent=2, sort_keys=True) + "\n")
        return csv_path, json_path


# -- config parsing ---------------------------------------------------------------------
def iet_from_dict(desc: dict) -> Iet:
    """Build an IET from any of the config spellings."""
    if "perm" in desc and "lengths" in desc:
        return Iet.from_json(desc)
    if "rotation" in desc:
        return rotation_iet(parse_exact(str(desc["rotation"])))
    if desc.get("golden"):
        return rotation((sqrt(5) - 1) / 2)
    if "quotients" in desc:
        return rotation_iet(from_quotients([int(a) for a in desc["quotients"]]))
    if "perron" in desc:
        p = desc["perron"]
        return perron_iet(tuple(p["perm"]), p["loop"])
    raise ConfigError(f"unrecognised IET description {desc!r}")


def trials(config: ExperimentConfig, default: Iet | None = None) -> list[Iet]:
    if config.iet is not None:
        return [iet_from_dict(config.iet)]
    if config.sampler is not None:
        s = config.sampler
        rng = SplitMix64(int(config.seed))
        return [sample_random_iet(int(s["d"]), int(s["Q"]), rng) for _ in range(int(s.get("count", 1)))]
    return [default] if default is not None else []


def _exact(x) -> list[str]:
    num, den = split_exact(x)
    return [num, den]


def _approx(x) -> str:
    return f"{float(x):.12g}"


def _param(config, name, default):
    value = config.params.get(name, default)
    return parse_exact(str(value)) if isinstance(default, (Fraction, str)) else value


def _summary(config: ExperimentConfig, **extra) -> dict:
    out = {
        "config": config.to_dict(),
        "versions": {"ietshrink": __version__, "python": platform.python_version()},
    }
    out.update(extra)
    return out


# -- runners --------------------------------------------------------------------------
def _target_measure(config):
    seq = TargetSequence.from_json(config.sequence or Harmonic(Fraction(1, 10)).to_json())
    x = to_exact(_param(config, "x", "0"))
    grid = int(config.params.get("grid", 100))
    schedule = [tuple(int(v) for v in cp) for cp in (config.schedule or [[1, 1000]])]
    bounds = ["lower", "upper"] if isinstance(seq, LogHarmonic) else [None]
    header = ("trial", "radius_bound", "checkpoint_N", "checkpoint_M", "measure_num", "measure_den", "measure_approx", "hit_fraction")
    rows, failures, monotone = [], 0, True
    for t, T in enumerate(trials(config, rotation((sqrt(5) - 1) / 2))):
        for bound in bounds:
            try:
                res = limsup_profile(T, x, seq, schedule, config.metric, grid, bound)
            except AssertionError:
                failures += 1
                monotone = False
                continue
            for (N, M), m, h in zip(res.checkpoints, res.measures, res.hit_fractions):
                rows.append([t, bound or "exact", N, M, *_exact(m), _approx(m), format_exact(h)])
    return header, rows, {"checks": {"monotone_in_M": monotone}}, failures


def _rv_path(config):
    n = int(config.params.get("n", 10))
    header = ("trial", "depth", "steps", "letter", "column_sums", "interval_num", "interval_den", "interval_approx", "column_sum_identity")
    rows, failures, stopped = [], 0, {}
    for t, T in enumerate(trials(config)):
        last = 0
        for rec in rv_walk(T, n):
            ok = column_sum_identity(T, rec)
            failures += not ok
            last = rec.depth
            rows.append([
                t, rec.depth, rec.steps, rec.steps[-1:] or "", ";".join(map(str, rec.column_sums)),
                *_exact(rec.interval_length), _approx(rec.interval_length), ok,
            ])
        if last < n:
            stopped[t] = last
    return header, rows, {"checks": {"column_sum_identity": failures == 0}, "stopped_early": stopped}, failures


def _rigidity_search(config):
    default = rotation_iet(from_quotients(DEFAULT_RIGID_QUOTIENTS))
    (T,) = trials(config, default)[:1] or [default]
    res = rigid_sequence(T, int(config.params.get("j_max", 6)), int(config.params.get("n_search", 20000)))
    header = ("j", "N_j", "block_measure_num", "block_measure_den", "bound_num", "bound_den", "below_bound", "good_measure_num", "good_measure_den")
    rows = [
        [b.j, b.N, *_exact(b.measure), *_exact(b.bound), b.below_bound, *_exact(b.good_measure)]
        for b in res.blocks
    ]
    failures = sum(not (b.below_bound and b.displacement_ok and b.good_measure >= b.good_floor) for b in res.blocks)
    extra = {
        "towers": [tw.to_json() for tw in res.towers],
        "sequence": res.sequence.to_json(),
        "checks": {"block_bound": failures == 0},
    }
    return header, rows, extra, failures


def random_separated_instance(rng: SplitMix64) -> dict:
    """Points, S, e, delta meeting the hypotheses of the separation lemma."""
    n = rng.randint(1, 12)
    Q = rng.randint(n + 1, 4000)
    pts = [Fraction(k, Q) for k in rng.subset(Q - 1, n)]
    sep = min((b - a for a, b in zip(pts, pts[1:])), default=Fraction(1))
    e = n * sep * Fraction(rng.randint(1, 64), 64)
    delta = e / (2 * n) * Fraction(rng.randint(1, 63), 64)
    # interval lengths up to e/n keep n eps / e <= t, so most instances
    # with t < n/3 have a positive right-hand side
    t = rng.randint(0, n // 3 + 1)
    S = IntervalSet(
        (lo, lo + e / n * Fraction(rng.below(65), 64))
        for lo in (Fraction(rng.randint(-Q // 10, Q), Q) for _ in range(t))
    )
    return {"points": pts, "S": S, "t": t, "e": e, "delta": delta}


def random_separated2_instance(rng: SplitMix64, d_max: int = 5, Q: int = 10**6, max_tries: int = 100) -> dict:
    """IET, ball union S, e, eps, delta meeting the preimage lemma's hypotheses."""
    for _ in range(max_tries):
        T = sample_random_iet(rng.randint(2, d_max), Q, rng)
        # the right-hand side is positive only for r >= 6
        r, k = rng.randint(6, 8), rng.randint(1, 2)
        top = r ** (k + 1)
        if not discontinuity_orbits_distinct(T, top):
            continue
        e = min_gap(T, top) * top * Fraction(rng.randint(1, 63), 64)
        balls = []
        nballs = rng.randint(0, r**k)
        for _ in range(nballs):
            c = rng.fraction(Q)
            rad = e / (2 * top * max(nballs, 1)) * Fraction(rng.randint(1, 64), 64)
            balls.append((max(c - rad, 0), min(c + rad, 1)))
        S = IntervalSet(balls)
        delta = e / (2 * top) * Fraction(rng.randint(1, 63), 64)
        return {"T": T, "y": rng.fraction(Q), "S": S, "e": e, "eps": S.measure, "delta": delta, "r": r, "k": k}
    raise PreconditionViolated("no instance with distinct discontinuity orbits found")


def _separation_stats(config):
    count = int(config.params.get("count", 500))
    which = config.params.get("lemma", "both")
    rng = SplitMix64(int(config.seed))
    header = ("trial", "lemma", "n", "t", "eps_num", "eps_den", "e_num", "e_den", "delta_num", "delta_den", "lhs_num", "lhs_den", "rhs_num", "rhs_den", "holds")
    rows, fails = [], {"separated": 0, "separated_inverse": 0}
    for i in range(count):
        if which in ("both", "separated"):
            inst = random_separated_instance(rng)
            c = check_separated_bound(inst["points"], inst["S"], inst["e"], inst["delta"], inst["t"])
            fails["separated"] += not c.holds
            rows.append([i, "separated", len(inst["points"]), inst["t"], *_exact(inst["S"].measure), *_exact(inst["e"]),
                         *_exact(inst["delta"]), *_exact(c.lhs), *_exact(c.rhs), c.holds])
        if which in ("both", "separated_inverse"):
            inst = random_separated2_instance(rng)
            c = check_separated_bound_inverse(inst["T"], inst["y"], inst["S"], inst["e"], inst["eps"], inst["delta"], inst["r"], inst["k"])
            fails["separated_inverse"] += not c.holds
            rows.append([i, "separated_inverse", inst["r"] ** (inst["k"] + 1) - inst["r"] ** inst["k"] + 1, len(inst["S"]),
                         *_exact(inst["eps"]), *_exact(inst["e"]), *_exact(inst["delta"]), *_exact(c.lhs), *_exact(c.rhs), c.holds])
    failures = sum(fails.values())
    return header, rows, {"checks": {k: v == 0 for k, v in fails.items()}, "failures": fails}, failures


def _hitting_time(config):
    (T,) = trials(config, rotation((sqrt(5) - 1) / 2))[:1]
    x, y = to_exact(_param(config, "x", "0")), to_exact(_param(config, "y", "1/2"))
    k_min, k_max = int(config.params.get("k_min", 4)), int(config.params.get("k_max", 16))
    cap = int(config.params.get("cap", 10**7))
    radii = [Fraction(1, 2**k) for k in range(k_min, k_max + 1)]
    taus = hitting_times(T, x, y, radii, cap, config.metric)
    header = ("k", "r_num", "r_den", "tau", "exponent_lo", "exponent_hi")
    rows = []
    for k, r, tau in zip(range(k_min, k_max + 1), radii, taus):
        if tau is None:
            rows.append([k, *_exact(r), "", "", ""])
        elif tau == 1:
            rows.append([k, *_exact(r), 1, "0", "0"])
        else:
            lo, hi = hitting_exponent(tau, r)
            rows.append([k, *_exact(r), tau, format_exact(lo), format_exact(hi)])
    return header, rows, {"censored": sum(t is None for t in taus)}, 0


def _rauzy_class(config):
    perm = tuple(int(p) for p in config.params["perm"])
    members = sorted(rauzy_class(perm))
    header = ("index", "perm")
    rows = [[i, " ".join(map(str, p))] for i, p in enumerate(members)]
    return header, rows, {"size": len(members)}, 0


def _cf(config):
    alpha = to_exact(_param(config, "alpha", "(-1+1*sqrt(5))/2"))
    n = int(config.params.get("n", 20))
    bound = int(config.params.get("bound", 10))
    rep = kurzweil_exponent(alpha, n)
    cf = cf_expand(alpha, n)
    header = ("k", "a_k", "p_k", "q_k", "exponent_lo", "exponent_hi")
    rows = [[k, a, p, q, format_exact(lo), format_exact(hi)] for k, a, p, q, lo, hi in rep.rows]
    extra = {
        "terminated": cf.terminated,
        "preperiod": cf.preperiod,
        "period": cf.period,
        "exponent": [format_exact(rep.lo), format_exact(rep.hi)],
        "badly_approximable_bound": bound,
        "badly_approximable": rep.badly_approximable(bound),
    }
    return header, rows, extra, 0


def _three_gap(config):
    alpha = to_exact(_param(config, "alpha", "(-1+1*sqrt(5))/2"))
    n = int(config.params.get("n", 10))
    gaps = three_gaps(alpha, n)
    header = ("gap_num", "gap_den", "gap_approx", "multiplicity")
    rows = [[*_exact(g), _approx(g), m] for g, m in sorted(gaps.items(), key=lambda gm: float(gm[0]))]
    ok = len(gaps) <= 3
    return header, rows, {"distinct": len(gaps), "checks": {"three_gap": ok}}, int(not ok)


def _perron(config):
    T = perron_iet(tuple(int(p) for p in config.params["perm"]), config.params["loop"])
    header = ("index", "length_num", "length_den", "length_approx")
    rows = [[i + 1, *_exact(v), _approx(v)] for i, v in enumerate(T.lengths)]
    return header, rows, {"iet": T.to_json()}, 0


def _induce(config):
    (T,) = trials(config)[:1]
    u, v = to_exact(_param(config, "u", "0")), to_exact(_param(config, "v", format_exact(T.total)))
    ind = induce(T, u, v)
    header = ("piece", "lo_num", "lo_den", "hi_num", "hi_den", "return_time")
    rows = [[i + 1, *_exact(lo), *_exact(hi), r] for i, ((lo, hi), r) in enumerate(zip(ind.pieces, ind.return_times))]
    return header, rows, {"induced": ind.iet.to_json()}, 0


def _sample(config):
    header = ("trial", "perm", "lengths")
    rows = [[t, " ".join(map(str, T.perm)), " ".join(format_exact(v) for v in T.lengths)] for t, T in enumerate(trials(config))]
    return header, rows, {}, 0


RUNNERS = {
    "target-measure": _target_measure,
    "rv-path": _rv_path,
    "rigidity-search": _rigidity_search,
    "separation-stats": _separation_stats,
    "hitting-time": _hitting_time,
    "rauzy-class": _rauzy_class,
    "cf": _cf,
    "three-gap": _three_gap,
    "perron": _perron,
    "induce": _induce,
    "sample": _sample,
}


def run_experiment(config: ExperimentConfig) -> Report:
    header, rows, extra, failures = RUNNERS[config.kind](config)
    summary = _summary(config, rows=len(rows), theorem_failures=failures, **extra)
    return Report(config.kind, tuple(header), rows, summary, failures)
