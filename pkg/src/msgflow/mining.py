"""Support counting and confidence-based binary pattern mining.

Sequential support of a message sequence in a trace is the maximum number
of pairwise instance-disjoint occurrences whose steps strictly increase;
two instances inside the same step are never ordered.  Greedy
earliest-completion matching attains that maximum.  Binary candidates are
kept when their forward (resp. backward) confidence is exactly 100% on
every trace where it is defined, which separates causality from mere
co-occurrence in concurrent traces.
"""
from __future__ import annotations

from bisect import bisect_right
from fractions import Fraction
from typing import Iterable, Sequence

from .model import (
    CAUSALITY_RULES,
    Message,
    Pattern,
    Trace,
    TraceSet,
    as_trace_set,
    is_causal,
)

__all__ = [
    "SupportTable",
    "message_support",
    "sequence_support",
    "forward_confidence",
    "backward_confidence",
    "set_forward_confidence",
    "set_backward_confidence",
    "is_causal",
    "mine_binary",
]

MessageSeq = tuple[Message, ...]


def _as_sequence(obj: Message | Iterable[Message]) -> MessageSeq:
    if isinstance(obj, Message):
        return (obj,)
    seq = tuple(obj)
    if not seq:
        raise ValueError("message sequence must be non-empty")
    for m in seq:
        if not isinstance(m, Message):
            raise TypeError(f"expected Message, got {m!r}")
    return seq


class SupportTable:
    """Occurrence index of one trace: per-message step positions (with
    multiplicity, ascending) plus disjoint-occurrence counting."""

    __slots__ = ("steps_of", "num_steps")

    def __init__(self, trace: Trace) -> None:
        steps_of: dict[Message, list[int]] = {}
        for si, step in enumerate(trace.steps):
            for inst in step:
                steps_of.setdefault(inst.message, []).append(si)
        self.steps_of = steps_of
        self.num_steps = len(trace.steps)

    def count(self, message: Message) -> int:
        lst = self.steps_of.get(message)
        return len(lst) if lst else 0

    def pair_count(self, first: Message, second: Message) -> int:
        """Maximum disjoint (first, second) matches with strictly
        increasing steps; same-step pairs never match."""
        la = self.steps_of.get(first)
        lb = self.steps_of.get(second)
        if not la or not lb:
            return 0
        count = 0
        j = 0
        nb = len(lb)
        for a in la:
            while j < nb and lb[j] <= a:
                j += 1
            if j == nb:
                break
            count += 1
            j += 1
        return count

    def sequence_count(self, seq: Sequence[Message]) -> int:
        """Maximum pairwise instance-disjoint occurrences of ``seq``."""
        seq = tuple(seq)
        if not seq:
            raise ValueError("sequence must be non-empty")
        if len(seq) == 1:
            return self.count(seq[0])
        if len(seq) == 2 and seq[0] != seq[1]:
            return self.pair_count(seq[0], seq[1])
        lists = []
        for m in seq:
            lst = self.steps_of.get(m)
            if not lst:
                return 0
            lists.append(lst)
        if len(set(seq)) == len(seq):
            return self._count_distinct(lists)
        return self._count_general(seq)

    def _count_distinct(self, lists: list[list[int]]) -> int:
        # Greedy leftmost rounds; per-position pointers only advance, since
        # entries skipped for an earlier round stay unusable later.
        ptrs = [0] * len(lists)
        count = 0
        while True:
            pos = -1
            for i, lst in enumerate(lists):
                p = ptrs[i]
                n = len(lst)
                while p < n and lst[p] <= pos:
                    p += 1
                if p == n:
                    return count
                pos = lst[p]
                ptrs[i] = p + 1
            count += 1

    def _count_general(self, seq: MessageSeq) -> int:
        # Repeated messages share one pool of free instances per message.
        free = {m: list(self.steps_of[m]) for m in set(seq)}
        count = 0
        while True:
            pos = -1
            for m in seq:
                lst = free[m]
                i = bisect_right(lst, pos)
                if i == len(lst):
                    return count
                pos = lst.pop(i)
            count += 1


def message_support(message: Message, trace: Trace) -> int:
    """Number of instances of ``message`` in the trace."""
    return sum(1 for m in trace.messages() if m == message)


def sequence_support(seq: Message | Iterable[Message], trace: Trace) -> int:
    """Pairwise instance-disjoint occurrences of ``seq`` in the trace,
    each occurrence at strictly increasing step indices, counted by a
    greedy earliest-completion scan.

    For sequences of pairwise-distinct messages (every mined pattern is
    one) the greedy count is the true maximum.  With repeated messages it
    is only a lower bound: no single-scan strategy attains the maximum on
    e.g. ``b a a b a a b b`` for ``(b, a, b)``."""
    return SupportTable(trace).sequence_count(_as_sequence(seq))


def forward_confidence(
    s1: Message | Iterable[Message], s2: Message | Iterable[Message], trace: Trace
) -> float | None:
    """supp(s1 # s2) / supp(s1); None when supp(s1) is zero."""
    a = _as_sequence(s1)
    b = _as_sequence(s2)
    table = SupportTable(trace)
    denom = table.sequence_count(a)
    if denom == 0:
        return None
    return table.sequence_count(a + b) / denom


def backward_confidence(
    s1: Message | Iterable[Message], s2: Message | Iterable[Message], trace: Trace
) -> float | None:
    """supp(s1 # s2) / supp(s2); None when supp(s2) is zero."""
    a = _as_sequence(s1)
    b = _as_sequence(s2)
    table = SupportTable(trace)
    denom = table.sequence_count(b)
    if denom == 0:
        return None
    return table.sequence_count(a + b) / denom


def _set_confidence(
    s1: MessageSeq, s2: MessageSeq, traces: TraceSet, *, backward: bool
) -> tuple[float | None, bool]:
    ratios: list[Fraction] = []
    exact = True
    for trace in traces:
        table = SupportTable(trace)
        denom = table.sequence_count(s2 if backward else s1)
        if denom == 0:
            continue
        num = table.sequence_count(s1 + s2)
        ratios.append(Fraction(num, denom))
        if num != denom:
            exact = False
    if not ratios:
        return None, False
    avg = sum(ratios, Fraction(0)) / len(ratios)
    return float(avg), exact


def set_forward_confidence(
    s1: Message | Iterable[Message],
    s2: Message | Iterable[Message],
    traces: TraceSet | Iterable[Trace],
) -> tuple[float | None, bool]:
    """Average forward confidence over traces where defined, plus an
    exact-100% flag decided by integer support equality per trace."""
    return _set_confidence(
        _as_sequence(s1), _as_sequence(s2), as_trace_set(traces), backward=False
    )


def set_backward_confidence(
    s1: Message | Iterable[Message],
    s2: Message | Iterable[Message],
    traces: TraceSet | Iterable[Trace],
) -> tuple[float | None, bool]:
    return _set_confidence(
        _as_sequence(s1), _as_sequence(s2), as_trace_set(traces), backward=True
    )


def _check_threshold(threshold: float) -> None:
    if not (0.0 < threshold <= 1.0):
        raise ValueError(f"confidence threshold must be in (0, 1], got {threshold}")


def _evaluate_pairs(
    candidates: list[tuple[Message, Message]],
    tables: list[SupportTable],
    with_msg: dict[Message, list[int]],
    threshold: float,
) -> list[tuple[Message, Message, dict | None, dict | None]]:
    """For each ordered candidate pair, decide forward and backward
    qualification and return per-direction stats (None when rejected)."""
    exact_mode = threshold >= 1.0
    thr = Fraction(*(float(threshold)).as_integer_ratio())
    out = []
    for a, b in candidates:
        ta = with_msg.get(a, ())
        tb = with_msg.get(b, ())
        relevant = sorted(set(ta) | set(tb))
        fwd_alive = bool(ta)
        bwd_alive = bool(tb)
        fwd_ratios: list[Fraction] = []
        bwd_ratios: list[Fraction] = []
        for ti in relevant:
            if not (fwd_alive or bwd_alive):
                break
            table = tables[ti]
            ca = table.count(a)
            cb = table.count(b)
            pair = None
            if (fwd_alive and ca) or (bwd_alive and cb):
                pair = table.pair_count(a, b)
            if fwd_alive and ca:
                if exact_mode:
                    if pair != ca:
                        fwd_alive = False
                else:
                    fwd_ratios.append(Fraction(pair, ca))
            if bwd_alive and cb:
                if exact_mode:
                    if pair != cb:
                        bwd_alive = False
                else:
                    bwd_ratios.append(Fraction(pair, cb))

        def stats(alive: bool, ratios: list[Fraction], defined: int) -> dict | None:
            if exact_mode:
                if not alive or defined == 0:
                    return None
                return {"confidence": 1.0, "defined_traces": defined}
            if not ratios:
                return None
            avg = sum(ratios, Fraction(0)) / len(ratios)
            if avg < thr:
                return None
            return {"confidence": float(avg), "defined_traces": len(ratios)}

        out.append((a, b, stats(fwd_alive, fwd_ratios, len(ta)), stats(bwd_alive, bwd_ratios, len(tb))))
    return out


def build_support_tables(traces: TraceSet) -> tuple[list[SupportTable], dict[Message, list[int]]]:
    """Index every trace and record, per message, which traces contain it."""
    tables = [SupportTable(t) for t in traces]
    with_msg: dict[Message, list[int]] = {}
    for ti, table in enumerate(tables):
        for m in table.steps_of:
            with_msg.setdefault(m, []).append(ti)
    return tables, with_msg


def mine_binary(
    traces: TraceSet | Iterable[Trace],
    *,
    threshold: float = 1.0,
    causality: str = "dest-src",
    jobs: int = 1,
) -> tuple[set[Pattern], set[Pattern]]:
    """Mine binary patterns over all causal ordered message pairs.

    Returns ``(forward, backward)``: the forward set holds pairs whose
    forward confidence qualifies (origin "C"), the backward set likewise
    for backward confidence (origin "R").  With the default threshold of
    1.0 qualification means exact-100% on every defined trace; thresholds
    below 1.0 switch to averaged-confidence comparison (experimental).
    """
    ts = as_trace_set(traces)
    if not ts.traces:
        raise ValueError("cannot mine an empty trace set")
    _check_threshold(threshold)
    if causality not in CAUSALITY_RULES:
        raise ValueError(f"unknown causality rule {causality!r}; expected one of {CAUSALITY_RULES}")
    if jobs < 1:
        raise ValueError(f"jobs must be >= 1, got {jobs}")

    tables, with_msg = build_support_tables(ts)
    alphabet = sorted(ts.alphabet)
    candidates = [
        (a, b)
        for a in alphabet
        for b in alphabet
        if a != b and is_causal(a, b, causality)
    ]

    if jobs > 1 and len(candidates) > 1:
        from joblib import Parallel, delayed

        n = min(jobs, len(candidates))
        size = -(-len(candidates) // n)
        chunks = [candidates[i : i + size] for i in range(0, len(candidates), size)]
        parts = Parallel(n_jobs=n)(
            delayed(_evaluate_pairs)(chunk, tables, with_msg, threshold) for chunk in chunks
        )
        results = [r for part in parts for r in part]
    else:
        results = _evaluate_pairs(candidates, tables, with_msg, threshold)

    forward: set[Pattern] = set()
    backward: set[Pattern] = set()
    for a, b, fwd, bwd in results:
        if fwd is not None:
            forward.add(Pattern((a, b), origin="C", support_stats=fwd))
        if bwd is not None:
            backward.add(Pattern((a, b), origin="R", support_stats=bwd))
    return forward, backward
