"""Validity checking and precision/recall scoring against ground truth.

A mined pattern is valid when some ground-truth sequence orders every pair
of its messages consistently: for each ordered pair of the pattern whose
messages both occur in the witness, the witness must keep that order.
Messages absent from the witness constrain nothing, so a pattern can be
valid through a witness it barely intersects; this permissive reading is
deliberate.  Recall, by contrast, counts exact sequence matches only.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .flows import GroundTruth
from .model import Message, Pattern

__all__ = [
    "find_witness",
    "is_valid",
    "precision",
    "recall",
    "length_histogram",
    "evaluate",
    "PatternVerdict",
    "EvalReport",
]


def _ordered_consistently(seq: tuple[Message, ...], witness: tuple[Message, ...]) -> bool:
    pos: dict[Message, int] = {m: i for i, m in enumerate(witness)}
    placed = [pos[m] for m in seq if m in pos]
    # all co-occurring pairs keep their order iff the placed positions
    # are strictly increasing
    return all(a < b for a, b in zip(placed, placed[1:]))


def find_witness(pattern: Pattern | Iterable[Message], gt: GroundTruth) -> int | None:
    """Index of the first ground-truth sequence that orders every
    co-occurring pair of the pattern consistently, or None."""
    seq = pattern.messages if isinstance(pattern, Pattern) else tuple(pattern)
    for i, witness in enumerate(gt.sequences):
        if _ordered_consistently(seq, witness):
            return i
    return None


def is_valid(pattern: Pattern | Iterable[Message], gt: GroundTruth) -> bool:
    return find_witness(pattern, gt) is not None


@dataclass(frozen=True)
class PatternVerdict:
    pattern: Pattern
    valid: bool
    witness: str | None


@dataclass(frozen=True)
class EvalReport:
    """Scoring of a mined pattern set against ground truth."""

    verdicts: tuple[PatternVerdict, ...]
    precision: float | None
    recall: float
    length_histogram: Mapping[int, tuple[int, int]]
    gt_matched: tuple[tuple[Message, ...], ...]
    gt_total: int

    @property
    def num_mined(self) -> int:
        return len(self.verdicts)

    @property
    def num_valid(self) -> int:
        return sum(1 for v in self.verdicts if v.valid)


def evaluate(patterns: Iterable[Pattern], gt: GroundTruth) -> EvalReport:
    """Score a mined set: per-pattern validity verdicts, precision over
    mined patterns, exact-match recall over ground-truth sequences, and a
    per-length (valid, invalid) histogram."""
    if len(gt) == 0:
        raise ValueError("ground truth must contain at least one sequence")
    pats = sorted(
        set(patterns),
        key=lambda p: (-len(p.messages), tuple(m.canonical() for m in p.messages)),
    )
    verdicts = []
    hist: dict[int, list[int]] = {}
    matched: set[tuple[Message, ...]] = set()
    for p in pats:
        wi = find_witness(p, gt)
        label = gt.labels[wi] if wi is not None else None
        verdicts.append(PatternVerdict(p, wi is not None, label))
        slot = hist.setdefault(len(p.messages), [0, 0])
        slot[0 if wi is not None else 1] += 1
        if p.messages in gt:
            matched.add(p.messages)
    prec = None if not verdicts else sum(v.valid for v in verdicts) / len(verdicts)
    ordered_matched = tuple(s for s in gt.sequences if s in matched)
    return EvalReport(
        verdicts=tuple(verdicts),
        precision=prec,
        recall=len(matched) / len(gt),
        length_histogram={k: (v[0], v[1]) for k, v in sorted(hist.items())},
        gt_matched=ordered_matched,
        gt_total=len(gt),
    )


def precision(patterns: Iterable[Pattern], gt: GroundTruth) -> float | None:
    """Fraction of mined patterns that are valid; None for an empty set."""
    pats = set(patterns)
    if not pats:
        return None
    return sum(1 for p in pats if is_valid(p, gt)) / len(pats)


def recall(patterns: Iterable[Pattern], gt: GroundTruth) -> float:
    """Fraction of ground-truth sequences mined as exact sequence matches."""
    if len(gt) == 0:
        raise ValueError("ground truth must contain at least one sequence")
    mined_seqs = {p.messages for p in patterns}
    return sum(1 for s in gt.sequences if s in mined_seqs) / len(gt)


def length_histogram(patterns: Iterable[Pattern], gt: GroundTruth) -> dict[int, tuple[int, int]]:
    """Map pattern length to (valid, invalid) counts."""
    hist: dict[int, list[int]] = {}
    for p in set(patterns):
        slot = hist.setdefault(len(p.messages), [0, 0])
        slot[0 if is_valid(p, gt) else 1] += 1
    return {k: (v[0], v[1]) for k, v in sorted(hist.items())}
