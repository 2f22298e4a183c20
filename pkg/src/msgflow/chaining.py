"""Chaining of binary patterns into longer sequences.

Two patterns chain when a non-empty proper suffix of the first equals a
proper prefix of the second and the concatenation keeps all messages
unique.  Forward patterns close over themselves, backward patterns close
over themselves, backward patterns extend through forward ones, and
finally an evidence-gated pass joins forward onto backward patterns when
the end-to-end confidence of (first, last) holds over the trace set.  The
junction pairs of a chain are always consecutive pairs of the inputs, so
causal validity is inherited, never re-checked.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .model import Message, Pattern, Trace, TraceSet, as_trace_set
from .mining import SupportTable, build_support_tables

__all__ = [
    "chain_overlap",
    "close_forward",
    "close_backward",
    "extend_backward",
    "evidence_chains",
    "chain_patterns",
]

MessageSeq = tuple[Message, ...]


def _seq_of(obj: Pattern | Iterable[Message]) -> MessageSeq:
    if isinstance(obj, Pattern):
        return obj.messages
    return tuple(obj)


def chain_overlap(p1: Pattern | Iterable[Message], p2: Pattern | Iterable[Message]) -> MessageSeq | None:
    """Concatenate p1 with p2 minus their overlap, or None.

    The overlap is the longest non-empty proper suffix of p1 equal to a
    proper prefix of p2.  For unique-message patterns at most one overlap
    length can match, so "longest" is not a tie-break, just the search
    order.  Returns None when no overlap exists or the concatenation would
    repeat a message.
    """
    s1 = _seq_of(p1)
    s2 = _seq_of(p2)
    kmax = min(len(s1), len(s2)) - 1
    for k in range(kmax, 0, -1):
        if s1[-k:] == s2[:k]:
            combined = s1 + s2[k:]
            if len(set(combined)) == len(combined):
                return combined
            return None
    return None


def _sorted_seqs(seqs: Iterable[MessageSeq]) -> list[MessageSeq]:
    return sorted(seqs, key=lambda s: (len(s), tuple(m.canonical() for m in s)))


def _close(seqs: set[MessageSeq]) -> set[MessageSeq]:
    """Least fixpoint of chaining a set with itself.  Terminates because
    chains never repeat a message, so lengths are bounded by the alphabet."""
    result = set(seqs)
    while True:
        added: set[MessageSeq] = set()
        ordered = _sorted_seqs(result)
        for s1 in ordered:
            for s2 in ordered:
                c = chain_overlap(s1, s2)
                if c is not None and c not in result:
                    added.add(c)
        if not added:
            return result
        result |= added


def _wrap(existing: set[Pattern], seqs: set[MessageSeq], origin: str) -> set[Pattern]:
    out = set(existing)
    have = {p.messages for p in existing}
    for s in seqs:
        if s not in have:
            out.add(Pattern(s, origin=origin))
    return out


def close_forward(forward: set[Pattern]) -> set[Pattern]:
    """Chain forward-confident patterns over themselves to fixpoint."""
    return _wrap(forward, _close({p.messages for p in forward}), "C")


def close_backward(backward: set[Pattern]) -> set[Pattern]:
    """Chain backward-confident patterns over themselves to fixpoint."""
    return _wrap(backward, _close({p.messages for p in backward}), "R")


def extend_backward(backward: set[Pattern], forward: set[Pattern]) -> set[Pattern]:
    """Chain each backward pattern through each forward pattern; results
    join the backward set (single pass over the input snapshots, originals
    retained)."""
    r_seqs = _sorted_seqs({p.messages for p in backward})
    c_seqs = _sorted_seqs({p.messages for p in forward})
    added: set[MessageSeq] = set()
    for s1 in r_seqs:
        for s2 in c_seqs:
            c = chain_overlap(s1, s2)
            if c is not None:
                added.add(c)
    return _wrap(backward, added, "R")


class _GateOracle:
    """Caches end-to-end pair confidences over the trace set for the
    evidence rule."""

    def __init__(self, tables: list[SupportTable], with_msg: dict[Message, list[int]], threshold: float):
        self.tables = tables
        self.with_msg = with_msg
        self.threshold = threshold
        self.exact_mode = threshold >= 1.0
        self._thr = Fraction(*(float(threshold)).as_integer_ratio())
        self._cache: dict[tuple[Message, Message, bool], float | None] = {}

    def confidence(self, first: Message, last: Message, *, backward: bool) -> float | None:
        """Qualifying confidence of the ordered pair, or None if the gate
        fails.  Exact mode requires integer support equality on every
        defined trace; threshold mode requires average >= threshold."""
        key = (first, last, backward)
        if key in self._cache:
            return self._cache[key]
        denom_msg = last if backward else first
        defined = self.with_msg.get(denom_msg, ())
        result: float | None
        if not defined:
            result = None
        elif self.exact_mode:
            result = 1.0
            for ti in defined:
                table = self.tables[ti]
                denom = table.count(denom_msg)
                if table.pair_count(first, last) != denom:
                    result = None
                    break
        else:
            ratios = []
            for ti in defined:
                table = self.tables[ti]
                denom = table.count(denom_msg)
                ratios.append(Fraction(table.pair_count(first, last), denom))
            avg = sum(ratios, Fraction(0)) / len(ratios)
            result = float(avg) if avg >= self._thr else None
        self._cache[key] = result
        return result


def evidence_chains(
    forward: set[Pattern],
    backward: set[Pattern],
    traces: TraceSet | Iterable[Trace],
    *,
    threshold: float = 1.0,
) -> tuple[set[Pattern], set[Pattern]]:
    """Join forward patterns onto backward patterns, gated by end-to-end
    confidence over the traces.

    For each overlap chain p1 # p2 (p1 forward, p2 backward), the chain
    joins the forward set when the forward confidence of
    (first(p1), last(p2)) qualifies over the trace set, and the backward
    set when the backward confidence does.  Single pass over snapshots.
    """
    ts = as_trace_set(traces)
    tables, with_msg = build_support_tables(ts)
    oracle = _GateOracle(tables, with_msg, threshold)

    c_seqs = _sorted_seqs({p.messages for p in forward})
    r_seqs = _sorted_seqs({p.messages for p in backward})
    new_c: dict[MessageSeq, float] = {}
    new_r: dict[MessageSeq, float] = {}
    for s1 in c_seqs:
        for s2 in r_seqs:
            chain = chain_overlap(s1, s2)
            if chain is None:
                continue
            first, last = s1[0], s2[-1]
            conf_f = oracle.confidence(first, last, backward=False)
            if conf_f is not None and chain not in new_c:
                new_c[chain] = conf_f
            conf_b = oracle.confidence(first, last, backward=True)
            if conf_b is not None and chain not in new_r:
                new_r[chain] = conf_b

    out_c = set(forward)
    have_c = {p.messages for p in forward}
    for seq, conf in new_c.items():
        if seq not in have_c:
            out_c.add(Pattern(seq, origin="C", support_stats={"gate_confidence": conf}))
    out_r = set(backward)
    have_r = {p.messages for p in backward}
    for seq, conf in new_r.items():
        if seq not in have_r:
            out_r.add(Pattern(seq, origin="R", support_stats={"gate_confidence": conf}))
    return out_c, out_r


def chain_patterns(
    forward: set[Pattern],
    backward: set[Pattern],
    traces: TraceSet | Iterable[Trace] | None = None,
    *,
    threshold: float = 1.0,
    evidence_rule: bool = True,
) -> tuple[set[Pattern], set[Pattern]]:
    """Apply the four chaining rules in order and return the grown sets.

    Rules: forward closure, backward closure, backward-through-forward
    extension, then (unless disabled) the evidence-gated forward-onto-
    backward join, which needs the traces.  The result depends only on the
    set contents, not on iteration order.
    """
    c = close_forward(forward)
    r = close_backward(backward)
    r = extend_backward(r, c)
    if evidence_rule:
        if traces is None:
            raise ValueError("evidence rule needs the trace set; pass traces or disable it")
        c, r = evidence_chains(c, r, traces, threshold=threshold)
    return c, r
