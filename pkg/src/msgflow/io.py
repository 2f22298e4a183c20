"""File formats: trace text files, flow libraries, pattern sets, reports.

Traces travel as plain text so they stay diffable and easy to author:

    # anything after '#' is a comment
    == trace t0 ==
    cpu0:bus:rd_req@2
    bus:mem:rd_fwd@2 ; cpu0:bus:wr_req@3

Each non-blank line inside a trace is one step; ';' separates the
instances that share the step; '@' carries the optional address.  Flow
libraries, pattern sets, generator metadata, and evaluation reports are
JSON documents.
"""
from __future__ import annotations

import json
import os
import re
from dataclasses import asdict
from typing import Iterable, Mapping

from .evaluation import EvalReport
from .flows import FlowSpec, parse_flow_library
from .generator import GenMetadata
from .model import (
    Message,
    MessageInstance,
    Pattern,
    Trace,
    TraceSet,
    as_trace_set,
    parse_message,
)

__all__ = [
    "TraceFormatError",
    "PATTERN_SETS",
    "parse_traces",
    "render_traces",
    "read_traces",
    "write_traces",
    "read_flow_library",
    "write_flow_library",
    "flow_to_doc",
    "patterns_to_doc",
    "patterns_from_doc",
    "read_patterns",
    "write_patterns",
    "report_to_doc",
    "format_report",
    "write_report",
    "metadata_to_doc",
    "write_metadata",
]

PATTERN_SETS = ("C", "R", "CR", "ALT")

_HEADER = re.compile(r"==\s*trace\s+(\S+)\s*==\Z")


class TraceFormatError(ValueError):
    """Malformed trace file; the message carries ``path:line:``."""

    def __init__(self, source: str, line: int, problem: str) -> None:
        super().__init__(f"{source}:{line}: {problem}")
        self.source = source
        self.line = line
        self.problem = problem


def _parse_instance(token: str, source: str, line: int) -> MessageInstance:
    head, sep, tail = token.partition("@")
    address: int | None = None
    if sep:
        if not tail.isdigit():
            raise TraceFormatError(source, line, f"bad address {tail!r} in {token!r}")
        address = int(tail)
    try:
        return MessageInstance(parse_message(head), address)
    except ValueError as exc:
        raise TraceFormatError(source, line, str(exc)) from None


def parse_traces(text: str, *, source: str = "<string>") -> TraceSet:
    traces: list[Trace] = []
    seen_ids: set[str] = set()
    trace_id: str | None = None
    header_line = 0
    steps: list[tuple[MessageInstance, ...]] = []

    def flush() -> None:
        if trace_id is not None:
            if not steps:
                raise TraceFormatError(source, header_line, f"trace {trace_id!r} has no steps")
            traces.append(Trace(tuple(steps), trace_id=trace_id))

    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        header = _HEADER.fullmatch(stripped)
        if header:
            flush()
            trace_id = header.group(1)
            if trace_id in seen_ids:
                raise TraceFormatError(source, lineno, f"duplicate trace id {trace_id!r}")
            seen_ids.add(trace_id)
            header_line = lineno
            steps = []
            continue
        if trace_id is None:
            raise TraceFormatError(source, lineno, "step line before any '== trace <id> ==' header")
        parts = [p.strip() for p in stripped.split(";")]
        if any(not p for p in parts):
            raise TraceFormatError(source, lineno, "empty instance between ';' separators")
        steps.append(tuple(_parse_instance(p, source, lineno) for p in parts))
    flush()
    return TraceSet(tuple(traces))


def render_traces(traces: TraceSet | Iterable[Trace]) -> str:
    ts = as_trace_set(traces)
    lines: list[str] = []
    for i, t in enumerate(ts.traces):
        lines.append(f"== trace {t.trace_id or f't{i}'} ==")
        for step in t.steps:
            lines.append(" ; ".join(inst.render() for inst in step))
    return "\n".join(lines) + "\n" if lines else ""


def read_traces(path) -> TraceSet:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_traces(fh.read(), source=os.fspath(path))


def write_traces(traces: TraceSet | Iterable[Trace], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render_traces(traces))


def read_flow_library(path) -> list[FlowSpec]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_flow_library(json.load(fh))


def flow_to_doc(flow: FlowSpec) -> dict:
    return {
        "name": flow.name,
        "messages": {
            mid: {"src": m.src, "dest": m.dest, "cmd": m.cmd}
            for mid, m in flow.messages.items()
        },
        "edges": [list(e) for e in flow.edges],
        "start": flow.start,
        "terminals": sorted(flow.terminals),
    }


def write_flow_library(flows: Iterable[FlowSpec], path) -> None:
    doc = {"flows": [flow_to_doc(f) for f in flows]}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def _pattern_sort_key(p: Pattern) -> tuple:
    return (-len(p.messages), tuple(m.canonical() for m in p.messages))


def patterns_to_doc(patterns: Iterable[Pattern]) -> dict:
    """Longest first, canonical order within a length, so diffs are stable."""
    out = []
    for p in sorted(patterns, key=_pattern_sort_key):
        entry: dict = {
            "set": p.origin,
            "messages": [m.canonical() for m in p.messages],
        }
        if p.support_stats is not None:
            entry["support"] = dict(p.support_stats)
        out.append(entry)
    return {"patterns": out}


def patterns_from_doc(doc: Mapping) -> set[Pattern]:
    if not isinstance(doc, Mapping) or "patterns" not in doc:
        raise ValueError('pattern document must be a mapping with a "patterns" list')
    result: set[Pattern] = set()
    for entry in doc["patterns"]:
        origin = entry.get("set", "")
        if origin and origin not in PATTERN_SETS:
            raise ValueError(f"unknown pattern set tag {origin!r}; expected one of {PATTERN_SETS}")
        msgs = tuple(parse_message(m) for m in entry["messages"])
        result.add(Pattern(msgs, origin=origin, support_stats=entry.get("support")))
    return result


def read_patterns(path) -> set[Pattern]:
    with open(path, "r", encoding="utf-8") as fh:
        return patterns_from_doc(json.load(fh))


def write_patterns(patterns: Iterable[Pattern], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(patterns_to_doc(patterns), fh, indent=2)
        fh.write("\n")


def report_to_doc(report: EvalReport) -> dict:
    return {
        "num_mined": report.num_mined,
        "num_valid": report.num_valid,
        "precision": report.precision,
        "recall": report.recall,
        "gt_total": report.gt_total,
        "gt_matched": [[m.canonical() for m in s] for s in report.gt_matched],
        "length_histogram": {
            str(k): list(v) for k, v in sorted(report.length_histogram.items())
        },
        "patterns": [
            {
                "messages": [m.canonical() for m in v.pattern.messages],
                "set": v.pattern.origin,
                "valid": v.valid,
                "witness": v.witness,
            }
            for v in report.verdicts
        ],
    }


def format_report(report: EvalReport) -> str:
    prec = "n/a" if report.precision is None else f"{report.precision:.4f}"
    lines = [
        f"patterns mined : {report.num_mined}",
        f"valid          : {report.num_valid}",
        f"precision      : {prec}",
        f"recall         : {report.recall:.4f} ({len(report.gt_matched)}/{report.gt_total} ground-truth sequences)",
    ]
    if report.length_histogram:
        lines.append("by length:")
        lines.append("  length  valid  invalid")
        for k in sorted(report.length_histogram):
            valid, invalid = report.length_histogram[k]
            lines.append(f"  {k:>6}  {valid:>5}  {invalid:>7}")
    return "\n".join(lines) + "\n"


def write_report(report: EvalReport, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report_to_doc(report), fh, indent=2)
        fh.write("\n")


def metadata_to_doc(meta: GenMetadata) -> dict:
    return {
        "config": asdict(meta.config),
        "paths": [[m.canonical() for m in p] for p in meta.paths],
        "traces": [
            {
                "trace_id": rec.trace_id,
                "instances": [asdict(inst) for inst in rec.instances],
            }
            for rec in meta.records
        ],
    }


def write_metadata(meta: GenMetadata, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(metadata_to_doc(meta), fh, indent=2)
        fh.write("\n")
