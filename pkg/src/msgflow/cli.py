"""Command-line front end.

Subcommands cover the full loop: ``generate`` synthesizes traces from a
flow library, ``slice`` splits them by address, ``mine`` and ``baseline``
produce pattern sets, ``eval`` scores a pattern set against the flows'
ground truth, ``export-dot`` renders flows or patterns for Graphviz.
"""
from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import io
from .baseline import AlternatingMiner, ConcurrentStepError
from .flows import FlowSpecError, export_dot, ground_truth
from .generator import ADDRESS_MODES, MODES, GenConfig, PoolExhaustedError, generate
from .evaluation import evaluate
from .miner import PatternMiner
from .model import CAUSALITY_RULES
from .slicing import SLICE_POLICIES, slice_traces


def _add_generate(sub: argparse._SubParsersAction) -> None:
    p = sub.add_parser("generate", help="synthesize traces from a flow library")
    p.add_argument("--flows", required=True, help="flow library JSON")
    p.add_argument("--out", required=True, help="trace file to write")
    p.add_argument("--mode", choices=MODES, default="sm-i")
    p.add_argument("--traces", type=int, default=10, help="number of traces")
    p.add_argument("--instances", type=int, default=1, help="instances per ground-truth sequence per trace")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-batch", type=int, default=4, help="max messages per step (mm-i)")
    p.add_argument("--addresses", choices=ADDRESS_MODES, default="none")
    p.add_argument("--address-pool", type=int, default=8)
    p.add_argument("--max-active", type=int, default=None, help="cap on concurrently active instances")
    p.add_argument("--metadata", default=None, help="optional JSON sidecar with instance bookkeeping")


def _add_slice(sub: argparse._SubParsersAction) -> None:
    p = sub.add_parser("slice", help="split traces by transaction address")
    p.add_argument("--in", dest="inp", required=True, help="trace file to read")
    p.add_argument("--out", required=True, help="trace file to write")
    p.add_argument("--noaddr-policy", choices=SLICE_POLICIES, default="own")


def _add_mine(sub: argparse._SubParsersAction) -> None:
    p = sub.add_parser("mine", help="mine sequential patterns from traces")
    p.add_argument("--in", dest="inp", required=True, help="trace file to read")
    p.add_argument("--out", required=True, help="pattern JSON to write")
    p.add_argument("--confidence", type=float, default=1.0)
    p.add_argument("--causality", choices=CAUSALITY_RULES, default="dest-src")
    p.add_argument("--no-rule4", action="store_true", help="skip the cross-set evidence chaining rule")
    p.add_argument("--no-prune", action="store_true", help="keep redundant prefix/suffix patterns")
    p.add_argument("--slice", action="store_true", help="slice traces by address before mining")
    p.add_argument("--noaddr-policy", choices=SLICE_POLICIES, default="own")
    p.add_argument("--jobs", type=int, default=1)


def _add_baseline(sub: argparse._SubParsersAction) -> None:
    p = sub.add_parser("baseline", help="mine alternating patterns (requires single-message steps)")
    p.add_argument("--in", dest="inp", required=True, help="trace file to read")
    p.add_argument("--out", required=True, help="pattern JSON to write")


def _add_eval(sub: argparse._SubParsersAction) -> None:
    p = sub.add_parser("eval", help="score a pattern set against flow ground truth")
    p.add_argument("--patterns", required=True, help="pattern JSON to read")
    p.add_argument("--flows", required=True, help="flow library JSON")
    p.add_argument("--out", default=None, help="optional JSON report")


def _add_export_dot(sub: argparse._SubParsersAction) -> None:
    p = sub.add_parser("export-dot", help="render a flow or a pattern set as Graphviz")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--flows", help="flow library JSON")
    src.add_argument("--patterns", help="pattern JSON")
    p.add_argument("--name", default=None, help="flow to export (required when the library has several)")
    p.add_argument("--out", default=None, help="dot file (stdout when omitted)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="msgflow", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    _add_generate(sub)
    _add_slice(sub)
    _add_mine(sub)
    _add_baseline(sub)
    _add_eval(sub)
    _add_export_dot(sub)
    return parser


def _cmd_generate(args: argparse.Namespace) -> int:
    gt = ground_truth(io.read_flow_library(args.flows))
    config = GenConfig(
        mode=args.mode,
        instances_per_pattern=args.instances,
        num_traces=args.traces,
        seed=args.seed,
        max_batch=args.max_batch,
        address_mode=args.addresses,
        address_pool=args.address_pool,
        max_active=args.max_active,
    )
    traces, meta = generate(gt, config)
    io.write_traces(traces, args.out)
    if args.metadata:
        io.write_metadata(meta, args.metadata)
    total = sum(len(t) for t in traces)
    print(f"wrote {len(traces)} traces ({total} steps) to {args.out}")
    return 0


def _cmd_slice(args: argparse.Namespace) -> int:
    traces = io.read_traces(args.inp)
    sliced = slice_traces(traces, policy=args.noaddr_policy)
    io.write_traces(sliced, args.out)
    print(f"wrote {len(sliced)} sub-traces to {args.out}")
    return 0


def _cmd_mine(args: argparse.Namespace) -> int:
    traces = io.read_traces(args.inp)
    if args.slice:
        traces = slice_traces(traces, policy=args.noaddr_policy)
    miner = PatternMiner(
        confidence=args.confidence,
        causality=args.causality,
        evidence_rule=not args.no_rule4,
        prune_redundant=not args.no_prune,
        jobs=args.jobs,
    )
    patterns = miner.fit_predict(traces)
    io.write_patterns(patterns, args.out)
    print(f"wrote {len(patterns)} patterns to {args.out}")
    return 0


def _cmd_baseline(args: argparse.Namespace) -> int:
    patterns = AlternatingMiner().fit_predict(io.read_traces(args.inp))
    io.write_patterns(patterns, args.out)
    print(f"wrote {len(patterns)} patterns to {args.out}")
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    patterns = io.read_patterns(args.patterns)
    gt = ground_truth(io.read_flow_library(args.flows))
    report = evaluate(patterns, gt)
    if args.out:
        io.write_report(report, args.out)
    sys.stdout.write(io.format_report(report))
    return 0


def _cmd_export_dot(args: argparse.Namespace) -> int:
    if args.flows:
        flows = io.read_flow_library(args.flows)
        if args.name is not None:
            matches = [f for f in flows if f.name == args.name]
            if not matches:
                raise FlowSpecError(f"no flow named {args.name!r} in {args.flows}")
            flow = matches[0]
        elif len(flows) == 1:
            flow = flows[0]
        else:
            names = ", ".join(f.name for f in flows)
            raise FlowSpecError(f"--name required; library has several flows: {names}")
        text = export_dot(flow)
    else:
        text = export_dot(io.read_patterns(args.patterns), name=args.name)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


_COMMANDS = {
    "generate": _cmd_generate,
    "slice": _cmd_slice,
    "mine": _cmd_mine,
    "baseline": _cmd_baseline,
    "eval": _cmd_eval,
    "export-dot": _cmd_export_dot,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (
        OSError,
        ValueError,
        FlowSpecError,
        ConcurrentStepError,
        PoolExhaustedError,
        io.TraceFormatError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
