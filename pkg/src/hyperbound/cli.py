"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import baselines, bsp, engine, formats, metrics
from .errors import HyperboundError
from .generator import Fixed, GeneratorSpec, Uniform, ZipfPopularity, ZipfSize, generate
from .hypergraph import U64_MAX, CapacityMap, validate
from .ordering import UniversalRandom, WeightDescending

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _u64(text: str) -> int:
    if not (text.isascii() and text.isdigit()) or int(text) > U64_MAX:
        raise argparse.ArgumentTypeError(f"not an unsigned 64-bit integer: {text!r}")
    return int(text)


def _nonneg(text: str) -> int:
    if not (text.isascii() and text.isdigit()):
        raise argparse.ArgumentTypeError(f"not a non-negative integer: {text!r}")
    return int(text)


def _positive(text: str) -> int:
    value = _nonneg(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text!r}")
    return value


def _max_rounds(text: str) -> int | None:
    return None if text == "unbounded" else _positive(text)


def _edge_size(text: str):
    # "3" or "zipf:S:MAX"
    if text.startswith("zipf:"):
        try:
            _, s, mx = text.split(":")
            return ZipfSize(float(s), _positive(mx))
        except (ValueError, argparse.ArgumentTypeError):
            raise argparse.ArgumentTypeError(f"expected zipf:S:MAX, got {text!r}")
    return Fixed(_positive(text))


def _popularity(text: str):
    # "uniform" or "zipf:ALPHA"
    if text == "uniform":
        return Uniform()
    if text.startswith("zipf:"):
        try:
            return ZipfPopularity(float(text[5:]))
        except ValueError:
            pass
    raise argparse.ArgumentTypeError(f"expected uniform or zipf:ALPHA, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hyperbound", description="Hypergraph contribution bounding.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def instance_flags(p, rounds=False):
        p.add_argument("--edges", required=True, metavar="PATH", help="edge-list file")
        p.add_argument("--capacity", type=_nonneg, default=1, metavar="B",
                       help="default per-user capacity (default 1)")
        p.add_argument("--capacities", metavar="PATH", help="per-user capacity overrides")
        p.add_argument("--ordering", choices=["hash", "weight"], default="hash")
        p.add_argument("--seed", type=_u64, default=0)
        if rounds:
            p.add_argument("--max-rounds", type=_max_rounds, default=None, metavar="N|unbounded")
            p.add_argument("--no-early-stop", action="store_true")
            p.add_argument("--workers", type=_positive, default=1)

    def output_flags(p):
        p.add_argument("--out", metavar="PATH", help="selected-edges file (default stdout)")
        p.add_argument("--summary", metavar="PATH", help="JSON summary file")

    p = sub.add_parser("run", help="distributed rounds")
    instance_flags(p, rounds=True)
    output_flags(p)

    p = sub.add_parser("greedy", help="sequential greedy baseline")
    instance_flags(p)
    output_flags(p)

    p = sub.add_parser("optimal", help="exact optimum by exhaustive search")
    instance_flags(p)
    output_flags(p)
    p.add_argument("--limit", type=_nonneg, default=baselines.DEFAULT_EXACT_LIMIT)

    p = sub.add_parser("compare", help="run all methods and report ratios")
    instance_flags(p, rounds=True)
    p.add_argument("--limit", type=_nonneg, default=baselines.DEFAULT_EXACT_LIMIT)
    p.add_argument("--summary", metavar="PATH", help="JSON output (default stdout)")

    p = sub.add_parser("validate", help="report diagnostics for an instance")
    p.add_argument("--edges", required=True, metavar="PATH")
    p.add_argument("--capacity", type=_nonneg, default=1, metavar="B")
    p.add_argument("--capacities", metavar="PATH")

    p = sub.add_parser("gen", help="write a synthetic edge list")
    p.add_argument("--users", type=_positive, required=True)
    p.add_argument("--num-edges", type=_nonneg, required=True)
    p.add_argument("--edge-size", type=_edge_size, default=Fixed(3), metavar="K|zipf:S:MAX")
    p.add_argument("--popularity", type=_popularity, default=Uniform(), metavar="uniform|zipf:A")
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--out", metavar="PATH", help="edge-list file (default stdout)")
    return parser


def _load(args):
    caps = CapacityMap(args.capacity)
    if args.capacities:
        caps = formats.parse_capacities(Path(args.capacities).read_text(encoding="utf-8"),
                                        default=args.capacity)
    g = formats.read_edge_list(args.edges, caps)
    return g, caps


def _ordering(args):
    return (WeightDescending if args.ordering == "weight" else UniversalRandom)(args.seed)


def _config_summary(args, caps: CapacityMap) -> dict:
    out = {
        "capacity": caps.default,
        "capacity_overrides": len(caps.overrides),
        "ordering": args.ordering,
        "seed": args.seed,
    }
    if hasattr(args, "max_rounds"):
        out["max_rounds"] = args.max_rounds
        out["early_stop"] = not args.no_early_stop
    return out


def _engine_config(args) -> engine.EngineConfig:
    if args.max_rounds is None and args.no_early_stop:
        raise UsageError("--no-early-stop requires a finite --max-rounds")
    return engine.EngineConfig(args.max_rounds, _ordering(args), not args.no_early_stop)


def _emit(args, matched, summary: dict):
    selected, _ = formats.write_bundle(args.out, args.summary, matched, summary)
    if args.out is None:
        sys.stdout.write(selected)


def cmd_run(args) -> int:
    config = _engine_config(args)
    g, caps = _load(args)
    matched, trace = bsp.parallel_run(g, caps, config, args.workers)
    rep = metrics.report(g, caps, matched, trace)
    _emit(args, matched, {"method": "distributed", "config": _config_summary(args, caps),
                          "report": rep.to_json()})
    return EXIT_OK


def cmd_greedy(args) -> int:
    g, caps = _load(args)
    res = baselines.greedy(g, caps, _ordering(args))
    rep = metrics.report(g, caps, res.matched)
    _emit(args, res.matched, {"method": "greedy", "config": _config_summary(args, caps),
                              "report": rep.to_json()})
    return EXIT_OK


def cmd_optimal(args) -> int:
    g, caps = _load(args)
    res = baselines.exact_optimal(g, caps, args.limit)
    rep = metrics.report(g, caps, res.matched)
    _emit(args, res.matched, {"method": "exact", "config": _config_summary(args, caps),
                              "report": rep.to_json(), "optimum": res.optimum})
    return EXIT_OK


def _ratio_json(c: metrics.Comparison) -> dict:
    return {"numerator": c.numerator, "denominator": c.denominator,
            "ratio": c.ratio, "defined": c.defined}


def cmd_compare(args) -> int:
    config = _engine_config(args)
    g, caps = _load(args)
    matched, trace = bsp.parallel_run(g, caps, config, args.workers)
    dist = metrics.report(g, caps, matched, trace)
    greedy = baselines.greedy(g, caps, _ordering(args))
    out = {
        "format": formats.FORMAT_VERSION,
        "config": _config_summary(args, caps),
        "distributed": dist.to_json(),
        "greedy": metrics.report(g, caps, greedy.matched).to_json(),
        "ratios": {"distributed/greedy": _ratio_json(metrics.compare(dist, greedy))},
        "exact": None,
    }
    if g.num_edges <= args.limit:
        exact = baselines.exact_optimal(g, caps, args.limit)
        out["exact"] = metrics.report(g, caps, exact.matched).to_json()
        out["ratios"]["distributed/exact"] = _ratio_json(metrics.compare(dist, exact))
        out["ratios"]["greedy/exact"] = _ratio_json(metrics.compare(greedy, exact))
    text = json.dumps(out, indent=2, sort_keys=True) + "\n"
    if args.summary:
        Path(args.summary).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_validate(args) -> int:
    g, caps = _load(args)
    diags = validate(g, caps)
    print(f"{g.num_vertices} users, {g.num_edges} edges, {len(diags)} diagnostics")
    for d in diags:
        print(d)
    return EXIT_OK


def cmd_gen(args) -> int:
    spec = GeneratorSpec(args.users, args.num_edges, args.edge_size, args.popularity, args.seed)
    text = formats.serialize_edge_list(generate(spec))
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


COMMANDS = {
    "run": cmd_run,
    "greedy": cmd_greedy,
    "optimal": cmd_optimal,
    "compare": cmd_compare,
    "validate": cmd_validate,
    "gen": cmd_gen,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (HyperboundError, OSError, UnicodeDecodeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
