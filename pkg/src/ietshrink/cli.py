"""Command line entry point.

Exit codes: 0 success, 1 usage error, 2 a theorem checker failed,
3 runtime error.
"""
from __future__ import annotations

import argparse
import json
import sys

from .errors import IetError
from .experiments import ConfigError, ExperimentConfig, run_experiment

EXIT_OK, EXIT_USAGE, EXIT_CHECK, EXIT_RUNTIME = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _iet_args(p):
    p.add_argument("--perm", help="permutation, e.g. '2 1'")
    p.add_argument("--lengths", help="exact lengths, e.g. '5/8 3/8'")
    p.add_argument("--rotation", help="rotation number alpha")
    p.add_argument("--golden", action="store_true", help="golden rotation")


def _sampler_args(p):
    p.add_argument("--d", type=int)
    p.add_argument("--Q", type=int)
    p.add_argument("--count", type=int)


def _global_args(suppress: bool) -> argparse.ArgumentParser:
    # subcommands repeat the global flags; SUPPRESS keeps their defaults from
    # overwriting values given before the subcommand
    kw = {"default": argparse.SUPPRESS} if suppress else {}
    g = _Parser(add_help=False)
    g.add_argument("--config", help="JSON experiment config", **kw)
    g.add_argument("--out", help="output directory (default: CSV on stdout)", **kw)
    g.add_argument("--seed", type=int, help="u64 seed", **kw)
    g.add_argument("--metric", choices=("interval", "circle"), **kw)
    return g


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ietshrink", description=__doc__, parents=[_global_args(False)],
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    common = _global_args(True)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("rv-path", parents=[common], help="Rauzy-Veech path")
    _iet_args(p)
    _sampler_args(p)
    p.add_argument("--n", type=int)

    p = sub.add_parser("rauzy-class", parents=[common], help="Rauzy class of a permutation")
    p.add_argument("--perm")

    p = sub.add_parser("perron", parents=[common], help="self-similar IET of an induction loop")
    p.add_argument("--perm")
    p.add_argument("--loop")

    p = sub.add_parser("induce", parents=[common], help="first-return map to [u, v)")
    _iet_args(p)
    p.add_argument("--u")
    p.add_argument("--v")

    p = sub.add_parser("target-measure", parents=[common], help="measure of orbit-ball unions")
    _iet_args(p)
    _sampler_args(p)
    p.add_argument("--sequence", help="TargetSequence JSON")
    p.add_argument("--x")
    p.add_argument("--checkpoints", help="comma list of N:M pairs, e.g. '1:1000,1:10000'")
    p.add_argument("--grid", type=int)

    p = sub.add_parser("hitting-time", parents=[common], help="hitting times at r = 2^-k")
    _iet_args(p)
    p.add_argument("--x")
    p.add_argument("--y")
    p.add_argument("--k-min", type=int, dest="k_min")
    p.add_argument("--k-max", type=int, dest="k_max")
    p.add_argument("--cap", type=int)

    p = sub.add_parser("separation-stats", parents=[common], help="random checks of the separation lemmas")
    p.add_argument("--count", type=int)
    p.add_argument("--lemma", choices=("both", "separated", "separated_inverse"))

    p = sub.add_parser("rigidity-search", parents=[common], help="rigidity towers and block bounds")
    _iet_args(p)
    p.add_argument("--quotients", help="partial quotients of the rotation number")
    p.add_argument("--j-max", type=int, dest="j_max")
    p.add_argument("--n-search", type=int, dest="n_search")

    p = sub.add_parser("cf", parents=[common], help="continued fraction and exponent")
    p.add_argument("--alpha")
    p.add_argument("--n", type=int)
    p.add_argument("--bound", type=int)

    p = sub.add_parser("three-gap", parents=[common], help="circle gaps of k alpha")
    p.add_argument("--alpha")
    p.add_argument("--n", type=int)

    p = sub.add_parser("sample", parents=[common], help="random irreducible IETs")
    _sampler_args(p)
    return parser


# commands where --perm describes the IET rather than being a parameter
IET_COMMANDS = ("rv-path", "induce", "target-measure", "hitting-time", "rigidity-search")
PARAM_KEYS = ("n", "perm", "loop", "u", "v", "x", "y", "grid", "k_min", "k_max", "cap", "count", "lemma", "j_max", "n_search", "alpha", "bound")


def config_from_args(args) -> ExperimentConfig:
    data: dict = {}
    if args.config:
        try:
            with open(args.config) as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from None
        data = ExperimentConfig.from_json(text).to_dict()
    if args.command:
        if data and data["kind"] != args.command:
            raise UsageError(f"config kind {data['kind']!r} does not match command {args.command!r}")
        data["kind"] = args.command
    if "kind" not in data:
        raise UsageError("give a command or a --config with a 'kind'")
    params = dict(data.get("params") or {})
    ns = vars(args)
    kind = data["kind"]
    for key in PARAM_KEYS:
        if ns.get(key) is None:
            continue
        if key == "perm" and kind in IET_COMMANDS:
            continue
        if key == "count" and ns.get("d") is not None:
            continue
        value = ns[key]
        params[key] = [int(v) for v in value.split()] if key == "perm" else value
    data["params"] = params
    if ns.get("lengths") or (ns.get("perm") and kind in IET_COMMANDS):
        if not (ns.get("lengths") and ns.get("perm")):
            raise UsageError("--perm and --lengths go together")
        data["iet"] = {"perm": [int(v) for v in ns["perm"].split()], "lengths": ns["lengths"].split()}
    elif ns.get("rotation"):
        data["iet"] = {"rotation": ns["rotation"]}
    elif ns.get("golden"):
        data["iet"] = {"golden": True}
    elif ns.get("quotients"):
        data["iet"] = {"quotients": [int(v) for v in ns["quotients"].replace(",", " ").split()]}
    if ns.get("d") is not None or ns.get("Q") is not None:
        if ns.get("d") is None or ns.get("Q") is None:
            raise UsageError("--d and --Q go together")
        data["sampler"] = {"d": ns["d"], "Q": ns["Q"], "count": ns.get("count") or 1}
    if ns.get("sequence"):
        try:
            data["sequence"] = json.loads(ns["sequence"])
        except json.JSONDecodeError as exc:
            raise UsageError(f"--sequence: {exc}") from None
    if ns.get("checkpoints"):
        try:
            data["schedule"] = [[int(a) for a in cp.split(":")] for cp in ns["checkpoints"].split(",")]
        except ValueError:
            raise UsageError("--checkpoints expects N:M pairs") from None
    if args.seed is not None:
        data["seed"] = args.seed
    if args.metric is not None:
        data["metric"] = args.metric
    return ExperimentConfig.from_dict(data)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config = config_from_args(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        print(f"ietshrink: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    try:
        report = run_experiment(config)
    except (IetError, ArithmeticError, ValueError, KeyError) as exc:
        print(f"ietshrink: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    if args.out:
        csv_path, json_path = report.write(args.out)
        print(f"wrote {csv_path} and {json_path}", file=sys.stderr)
    else:
        sys.stdout.write(report.csv_text())
    if report.failures:
        print(f"ietshrink: {report.failures} theorem check(s) failed", file=sys.stderr)
        return EXIT_CHECK
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
