"""Address-based slicing of concurrent traces into per-transaction
sub-traces.

Messages observed under the same address belong to the same transaction;
grouping by address untangles interleavings without losing the step order
inside each group.  Sub-traces count as ordinary traces afterwards, so
per-trace confidences average over them individually.
"""
from __future__ import annotations

from typing import Iterable

from sklearn.base import BaseEstimator, TransformerMixin

from .model import Trace, TraceSet, as_trace_set

__all__ = ["SLICE_POLICIES", "slice_trace", "slice_traces", "TraceSlicer"]

# How to treat instances without an address: "own" collects them into a
# dedicated sub-trace, "broadcast" copies them into every address
# sub-trace, "drop" discards them.
SLICE_POLICIES = ("own", "broadcast", "drop")


def _check_policy(policy: str) -> None:
    if policy not in SLICE_POLICIES:
        raise ValueError(f"unknown no-address policy {policy!r}; expected one of {SLICE_POLICIES}")


def slice_trace(trace: Trace, policy: str = "own") -> list[tuple[int | None, Trace]]:
    """Split one trace into per-address sub-traces.

    Returns (key, sub-trace) pairs sorted by address, preserving step
    order and dropping steps that end up empty.  The key None tags the
    dedicated sub-trace of address-less instances under the "own" policy.
    """
    _check_policy(policy)
    addresses = sorted({inst.address for inst in trace.instances() if inst.address is not None})
    keys: list[int | None] = list(addresses)
    if policy == "own" and any(inst.address is None for inst in trace.instances()):
        keys.append(None)

    out: list[tuple[int | None, Trace]] = []
    for key in keys:
        steps = []
        for step in trace.steps:
            if key is None:
                kept = tuple(inst for inst in step if inst.address is None)
            elif policy == "broadcast":
                kept = tuple(
                    inst for inst in step if inst.address == key or inst.address is None
                )
            else:
                kept = tuple(inst for inst in step if inst.address == key)
            if kept:
                steps.append(kept)
        if steps:
            suffix = "noaddr" if key is None else f"addr={key}"
            tid = f"{trace.trace_id}/{suffix}" if trace.trace_id else suffix
            out.append((key, Trace(tuple(steps), trace_id=tid)))
    return out


def slice_traces(traces: TraceSet | Iterable[Trace], policy: str = "own") -> TraceSet:
    """Slice every trace of a set; each sub-trace becomes a trace of its
    own, with provenance recorded in its trace id."""
    ts = as_trace_set(traces)
    out: list[Trace] = []
    for i, trace in enumerate(ts):
        if trace.trace_id is None:
            trace = Trace(trace.steps, trace_id=f"t{i}")
        out.extend(sub for _, sub in slice_trace(trace, policy))
    return TraceSet(tuple(out))


class TraceSlicer(TransformerMixin, BaseEstimator):
    """Transformer wrapper around :func:`slice_traces`.

    Parameters
    ----------
    policy : str, default="own"
        Treatment of address-less instances: "own", "broadcast" or "drop".
    """

    def __init__(self, policy: str = "own"):
        self.policy = policy

    def fit(self, X, y=None):
        _check_policy(self.policy)
        return self

    def transform(self, X) -> TraceSet:
        _check_policy(self.policy)
        return slice_traces(as_trace_set(X), self.policy)
