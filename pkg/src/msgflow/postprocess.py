"""Redundancy pruning and merging of the mined pattern sets.

A pattern is redundant when it is a contiguous prefix or suffix of another
pattern in the same set; general subsequences are kept on purpose, since a
pattern like (m1, m8) carries branch information that (m1, ..., m8) does
not subsume.
"""
from __future__ import annotations

from typing import Iterable

from .model import Message, Pattern

__all__ = ["remove_redundant", "merge_patterns"]


def _is_prefix_or_suffix(small: tuple[Message, ...], big: tuple[Message, ...]) -> bool:
    if len(small) >= len(big):
        return False
    return big[: len(small)] == small or big[-len(small):] == small


def remove_redundant(patterns: Iterable[Pattern]) -> set[Pattern]:
    """Drop every pattern that is a contiguous prefix or suffix of another
    pattern in the input set.  The quantifier ranges over the input, which
    makes the operation idempotent."""
    pats = set(patterns)
    seqs = [p.messages for p in pats]
    return {
        p
        for p in pats
        if not any(_is_prefix_or_suffix(p.messages, q) for q in seqs if q != p.messages)
    }


def merge_patterns(forward: Iterable[Pattern], backward: Iterable[Pattern]) -> set[Pattern]:
    """Union the two sets, collapsing duplicate sequences with origin "CR".

    Stats of collapsed duplicates are taken from the forward side.
    """
    by_seq: dict[tuple[Message, ...], Pattern] = {}
    for p in forward:
        by_seq[p.messages] = Pattern(p.messages, origin="C", support_stats=p.support_stats)
    for p in backward:
        prev = by_seq.get(p.messages)
        if prev is None:
            by_seq[p.messages] = Pattern(p.messages, origin="R", support_stats=p.support_stats)
        else:
            by_seq[p.messages] = Pattern(
                p.messages, origin="CR", support_stats=prev.support_stats
            )
    return set(by_seq.values())
