"""Command line entry point: summarize, verify against the oracles, or generate."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import generators as gen
from .errors import SummarizeError
from .formats import build_report, ingest, read_hierarchy, read_weights, write_instance
from .core import ProductSpace
from .oracle import approximation_bound, brute_force_conflict_free, brute_force_optimal
from .solver import SolverConfig, solve
from .weights import WeightFunction, aggregate, build_weight_map

GENERATORS = ("two-tree", "simple-conflict", "power-conflict", "mis", "random")


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="hiersumm",
        description="Summarize metric changes over a product of hierarchies.",
    )
    p.add_argument("--mode", choices=("summarize", "verify", "generate"), default="summarize")
    p.add_argument("--hierarchy", action="append", default=[], metavar="FILE",
                   help="hierarchy CSV; repeat once per dimension, in dimension order")
    p.add_argument("--facts", metavar="FILE", help="two-period facts CSV")
    p.add_argument("--weights", metavar="FILE", help="per-node weights CSV (instead of --facts)")
    p.add_argument("--k", type=_positive_int, help="maximum number of segments")
    p.add_argument("--weight", choices=("absdiff", "composition", "boxcox"), default="absdiff")
    p.add_argument("--boxcox-m", type=float, default=0.2)
    p.add_argument("--engine", choices=("auto", "dense", "sparse"), default="auto")
    p.add_argument("--out", metavar="PATH",
                   help="report file (summarize/verify) or output directory (generate)")

    g = p.add_argument_group("generators")
    g.add_argument("--generator", choices=GENERATORS)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--x", type=float, default=1.0, help="two-tree change size")
    g.add_argument("--m", type=int, default=1, help="power-conflict exponent")
    g.add_argument("--epsilon", type=float, default=0.5, help="mis edge bonus")
    g.add_argument("--vertices", type=int, default=5, help="mis vertex count")
    g.add_argument("--max-edges", type=int, default=6, help="mis edge cap")
    g.add_argument("--dims", type=int, default=3, help="random: number of dimensions")
    g.add_argument("--tree-size", type=int, default=5, help="random: nodes per tree")
    g.add_argument("--max-height", type=int, default=3, help="random: tree height in nodes")
    g.add_argument("--density", type=float, default=1.0, help="random: leaf-cell density")
    return p


def _generate(args) -> gen.GeneratedInstance:
    name = args.generator
    if name == "two-tree":
        return gen.gen_two_tree_example(args.x)
    if name == "simple-conflict":
        return gen.gen_simple_conflict()
    if name == "power-conflict":
        return gen.gen_power_conflict(args.m)
    if name == "mis":
        rng = np.random.default_rng(args.seed)
        return gen.gen_mis_reduction(gen.Digraph.random(args.vertices, args.max_edges, rng), args.epsilon)
    return gen.gen_random(args.dims, args.tree_size, args.max_height, args.density, args.seed)


def _load(args):
    """Instance from files or a generator: ``(space, weights, aggregates, k_default)``."""
    wf = WeightFunction(args.weight, m=args.boxcox_m) if args.weight == "boxcox" else WeightFunction(args.weight)
    if args.generator:
        inst = _generate(args)
        if inst.cells is not None:
            weights = build_weight_map(inst.cells, inst.space, wf, dense=inst.weights.is_dense)
            return inst.space, weights, aggregate(inst.cells, inst.space), inst.k, wf
        return inst.space, inst.weights, None, inst.k, wf
    if not args.hierarchy:
        raise SummarizeError("give --hierarchy files (with --facts or --weights) or --generator")
    if bool(args.facts) == bool(args.weights):
        raise SummarizeError("give exactly one of --facts or --weights")
    if args.facts:
        space, cells = ingest(args.hierarchy, args.facts)
        return space, build_weight_map(cells, space, wf), aggregate(cells, space), None, wf
    space = ProductSpace([read_hierarchy(h) for h in args.hierarchy])
    return space, read_weights(args.weights, space), None, None, wf


def _weight_fn_info(wf: WeightFunction, from_facts: bool) -> dict:
    if not from_facts:
        return {"kind": "given"}
    info = {"kind": wf.kind}
    if wf.kind == "boxcox":
        info.update(m=wf.m, floor=wf.floor)
    return info


def _emit(doc, out):
    text = json.dumps(doc, indent=2, allow_nan=False) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def run_summarize(args) -> dict:
    space, weights, agg, k_default, wf = _load(args)
    k = args.k or k_default
    if k is None:
        raise SummarizeError("--k is required")
    sol = solve(space, weights, SolverConfig(k, args.engine))
    report = build_report(space, sol, k=k, weight_fn=_weight_fn_info(wf, agg is not None), aggregates=agg)
    _emit(report, args.out)
    return report


def run_verify(args) -> dict:
    space, weights, agg, k_default, wf = _load(args)
    k = args.k or k_default
    if k is None:
        raise SummarizeError("--k is required")
    sol = solve(space, weights, SolverConfig(k, args.engine))
    opt = brute_force_optimal(space, weights, k)
    cf = brute_force_conflict_free(space, weights, k)
    ratio = opt.total_weight / sol.total_weight if sol.total_weight > 0 else 1.0
    bound = approximation_bound(space)
    doc = {
        "schema": 1,
        "k": k,
        "dimensions": space.d,
        "solver_weight": sol.total_weight,
        "optimal_weight": opt.total_weight,
        "conflict_free_weight": cf.total_weight,
        "ratio": ratio,
        "bound": bound,
        "within_bound": ratio <= bound,
        "solver_matches_conflict_free": sol.total_weight == cf.total_weight,
    }
    _emit(doc, args.out)
    return doc


def run_generate(args) -> dict:
    if not args.generator:
        raise SummarizeError("--generator is required in generate mode")
    if not args.out:
        raise SummarizeError("--out DIR is required in generate mode")
    inst = _generate(args)
    files = write_instance(args.out, inst.space, cells=inst.cells,
                           weights=None if inst.cells is not None else inst.weights)
    meta = {"schema": 1, "generator": inst.name, "params": inst.params, "known": inst.known,
            "k": inst.k, "files": files}
    Path(args.out, "instance.json").write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")
    return meta


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.mode == "summarize":
            run_summarize(args)
        elif args.mode == "verify":
            run_verify(args)
        else:
            run_generate(args)
    except (SummarizeError, OSError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        sys.stderr.write(json.dumps(err) + "\n")
        return 1
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
