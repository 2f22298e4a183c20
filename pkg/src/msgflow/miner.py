"""End-to-end miner: binary patterns, chaining, redundancy pruning.

``PatternMiner`` strings the pipeline stages together behind one
``fit``.  Every stage stays importable on its own; the estimator only
adds parameter handling and result attributes.
"""
from __future__ import annotations

from typing import Iterable

from sklearn.base import BaseEstimator

from .chaining import chain_patterns
from .mining import mine_binary
from .model import CAUSALITY_RULES, Pattern, Trace, TraceSet, as_trace_set
from .postprocess import merge_patterns, remove_redundant

__all__ = ["PatternMiner", "mine"]


class PatternMiner(BaseEstimator):
    """Mine sequential message patterns from concurrent traces.

    Parameters
    ----------
    confidence : float, default 1.0
        Confidence both directions are held to.  1.0 keeps only pairs
        exact in every trace where the denominator message occurs;
        lower values accept an average confidence over traces.
    causality : str, default "dest-src"
        Structural gate on candidate pairs: "dest-src" requires the
        first message's destination to be the second's source,
        "src-dest" the reverse, "off" admits every ordered pair.
    evidence_rule : bool, default True
        Apply the cross-set chaining rule that joins a forward and a
        backward pattern when the joined endpoints themselves pass the
        confidence gate.
    prune_redundant : bool, default True
        Drop patterns that survive as a contiguous prefix or suffix of
        a longer pattern in the same set.
    jobs : int, default 1
        Worker processes for the binary stage.

    Attributes
    ----------
    binary_forward_, binary_backward_ : set[Pattern]
        Length-2 patterns straight out of the binary stage.
    forward_patterns_, backward_patterns_ : set[Pattern]
        Per-set results after chaining (and pruning when enabled).
    patterns_ : set[Pattern]
        Union of both sets with duplicates collapsed; a pattern found
        in both carries origin "CR".
    alphabet_ : frozenset[Message]
    """

    def __init__(
        self,
        confidence: float = 1.0,
        causality: str = "dest-src",
        evidence_rule: bool = True,
        prune_redundant: bool = True,
        jobs: int = 1,
    ) -> None:
        self.confidence = confidence
        self.causality = causality
        self.evidence_rule = evidence_rule
        self.prune_redundant = prune_redundant
        self.jobs = jobs

    def fit(self, X: TraceSet | Iterable[Trace], y: None = None) -> "PatternMiner":
        if not 0.0 < self.confidence <= 1.0:
            raise ValueError("confidence must be in (0, 1]")
        if self.causality not in CAUSALITY_RULES:
            raise ValueError(
                f"unknown causality {self.causality!r}; expected one of {CAUSALITY_RULES}"
            )
        ts = as_trace_set(X)
        fwd, bwd = mine_binary(
            ts, threshold=self.confidence, causality=self.causality, jobs=self.jobs
        )
        self.binary_forward_ = set(fwd)
        self.binary_backward_ = set(bwd)
        fwd, bwd = chain_patterns(
            fwd,
            bwd,
            ts,
            threshold=self.confidence,
            evidence_rule=self.evidence_rule,
        )
        if self.prune_redundant:
            fwd = remove_redundant(fwd)
            bwd = remove_redundant(bwd)
        self.forward_patterns_ = fwd
        self.backward_patterns_ = bwd
        self.patterns_ = merge_patterns(fwd, bwd)
        self.alphabet_ = ts.alphabet
        return self

    def fit_predict(self, X: TraceSet | Iterable[Trace], y: None = None) -> set[Pattern]:
        return self.fit(X, y).patterns_


def mine(
    traces: TraceSet | Iterable[Trace],
    *,
    confidence: float = 1.0,
    causality: str = "dest-src",
    evidence_rule: bool = True,
    prune_redundant: bool = True,
    jobs: int = 1,
) -> set[Pattern]:
    """One-call convenience over :class:`PatternMiner`."""
    return PatternMiner(
        confidence=confidence,
        causality=causality,
        evidence_rule=evidence_rule,
        prune_redundant=prune_redundant,
        jobs=jobs,
    ).fit_predict(traces)
