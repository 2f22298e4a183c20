"""Baseline miner built on strict alternation.

A pair (a, b) qualifies when every trace reads a b a b ... a b: equal
counts, and the k-th a precedes the k-th b which precedes the (k+1)-th a.
Pairs then chain into longer sequences when every ordered pair drawn
from the sequence alternates.  Concurrent steps have no order, so this
miner only accepts traces with single-message steps.
"""
from __future__ import annotations

from typing import Iterable, Sequence

from sklearn.base import BaseEstimator

from .model import Message, Pattern, Trace, TraceSet, as_trace_set

__all__ = [
    "ConcurrentStepError",
    "mine_alternating",
    "chain_alternating",
    "AlternatingMiner",
]


class ConcurrentStepError(ValueError):
    """Raised when a trace carries more than one message in a step."""


def _flatten(trace: Trace) -> list[Message]:
    out: list[Message] = []
    for i, step in enumerate(trace.steps):
        if len(step) != 1:
            raise ConcurrentStepError(
                f"trace {trace.trace_id!r} step {i} holds {len(step)} messages; "
                "alternation is only defined on single-message steps"
            )
        out.append(step[0].message)
    return out


def _alternates(la: Sequence[int], lb: Sequence[int]) -> bool:
    if len(la) != len(lb):
        return False
    for k in range(len(la)):
        if not la[k] < lb[k]:
            return False
        if k + 1 < len(la) and not lb[k] < la[k + 1]:
            return False
    return True


def mine_alternating(traces: TraceSet | Iterable[Trace]) -> set[tuple[Message, Message]]:
    """Ordered pairs alternating in every trace and present in at least one."""
    ts = as_trace_set(traces)
    flat = [_flatten(t) for t in ts.traces]
    positions: list[dict[Message, list[int]]] = []
    for seq in flat:
        pos: dict[Message, list[int]] = {}
        for i, m in enumerate(seq):
            pos.setdefault(m, []).append(i)
        positions.append(pos)

    alphabet = sorted(ts.alphabet)
    pairs: set[tuple[Message, Message]] = set()
    for a in alphabet:
        for b in alphabet:
            if a == b:
                continue
            seen = False
            ok = True
            for pos in positions:
                la = pos.get(a, ())
                lb = pos.get(b, ())
                if not la and not lb:
                    continue
                if not _alternates(la, lb):
                    ok = False
                    break
                seen = True
            if ok and seen:
                pairs.add((a, b))
    return pairs


def _is_subsequence(small: Sequence[Message], big: Sequence[Message]) -> bool:
    it = iter(big)
    return all(m in it for m in small)


def chain_alternating(pairs: set[tuple[Message, Message]]) -> set[Pattern]:
    """Extend pairs into maximal sequences.

    A message w extends a sequence when (u, w) alternates for every u
    already placed, which keeps the whole extension pairwise alternating.
    Sequences that ride along inside a longer result (as subsequences,
    order preserved) are dropped.
    """
    succ: dict[Message, set[Message]] = {}
    for a, b in pairs:
        succ.setdefault(a, set()).add(b)

    results: set[tuple[Message, ...]] = set()

    def grow(seq: list[Message]) -> None:
        cands = set(succ.get(seq[-1], ()))
        for u in seq[:-1]:
            cands &= succ.get(u, set())
        cands.discard(seq[0])
        extended = False
        for w in sorted(cands):
            if w in seq:
                continue
            seq.append(w)
            grow(seq)
            seq.pop()
            extended = True
        if not extended:
            results.add(tuple(seq))

    for a, b in sorted(pairs):
        grow([a, b])

    kept = {
        s
        for s in results
        if not any(t != s and _is_subsequence(s, t) for t in results)
    }
    return {Pattern(s, origin="ALT") for s in kept}


class AlternatingMiner(BaseEstimator):
    """Estimator wrapper: fit on traces, read patterns off ``patterns_``."""

    def fit(self, X: TraceSet | Iterable[Trace], y: None = None) -> "AlternatingMiner":
        ts = as_trace_set(X)
        self.pairs_ = mine_alternating(ts)
        self.patterns_ = chain_alternating(self.pairs_)
        self.alphabet_ = ts.alphabet
        return self

    def fit_predict(self, X: TraceSet | Iterable[Trace], y: None = None) -> set[Pattern]:
        return self.fit(X, y).patterns_
