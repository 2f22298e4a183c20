import pytest

from msgflow.chaining import (
    chain_overlap,
    chain_patterns,
    close_backward,
    close_forward,
    evidence_chains,
    extend_backward,
)
from msgflow.model import Message, Pattern

from conftest import linear_trace, traces


def _chain_msgs(n: int) -> list[Message]:
    """m[i] goes from component n{i} to n{i+1}, so every adjacency chains."""
    return [Message(f"n{i}", f"n{i+1}", f"m{i}") for i in range(n)]


class TestChainOverlap:
    def test_overlap_of_one(self):
        m = _chain_msgs(3)
        assert chain_overlap((m[0], m[1]), (m[1], m[2])) == (m[0], m[1], m[2])

    def test_overlap_of_two(self):
        m = _chain_msgs(4)
        assert chain_overlap((m[0], m[1], m[2]), (m[1], m[2], m[3])) == tuple(m)

    def test_no_overlap(self):
        m = _chain_msgs(4)
        assert chain_overlap((m[0], m[1]), (m[2], m[3])) is None

    def test_whole_pattern_is_not_an_overlap(self):
        m = _chain_msgs(2)
        # s1 == prefix of s2: only proper overlaps count
        assert chain_overlap((m[0], m[1]), (m[0], m[1])) is None

    def test_repeat_rejected(self):
        m = _chain_msgs(2)
        loop = Message("n2", "n0", "back")
        assert chain_overlap((m[0], m[1]), (m[1], loop, m[0])) is None

    def test_accepts_patterns(self):
        m = _chain_msgs(3)
        p1 = Pattern((m[0], m[1]), origin="C")
        p2 = Pattern((m[1], m[2]), origin="C")
        assert chain_overlap(p1, p2) == (m[0], m[1], m[2])


class TestClosures:
    def test_forward_closure_builds_all_runs(self):
        m = _chain_msgs(4)
        inp = {Pattern((a, b), origin="C") for a, b in zip(m, m[1:])}
        out = {p.messages for p in close_forward(inp)}
        expected = {
            tuple(m[i:j]) for i in range(4) for j in range(i + 2, 5)
        }
        assert out == expected

    def test_closure_keeps_input_annotations(self):
        m = _chain_msgs(3)
        p = Pattern((m[0], m[1]), origin="C", support_stats={"confidence": 1.0})
        out = close_forward({p, Pattern((m[1], m[2]), origin="C")})
        kept = next(q for q in out if q == p)
        assert kept.support_stats == {"confidence": 1.0}

    def test_backward_origin(self):
        m = _chain_msgs(3)
        out = close_backward({Pattern((m[0], m[1]), origin="R"), Pattern((m[1], m[2]), origin="R")})
        grown = next(q for q in out if len(q) == 3)
        assert grown.origin == "R"

    def test_extend_backward_is_single_pass(self):
        m = _chain_msgs(4)
        backward = {Pattern((m[0], m[1]), origin="R")}
        forward = {Pattern((m[1], m[2]), origin="C"), Pattern((m[2], m[3]), origin="C")}
        out = {p.messages for p in extend_backward(backward, forward)}
        assert (m[0], m[1], m[2]) in out
        # the freshly grown chain is not re-joined within the same pass
        assert tuple(m) not in out

    def test_extend_backward_keeps_originals(self):
        m = _chain_msgs(3)
        backward = {Pattern((m[0], m[1]), origin="R")}
        out = extend_backward(backward, set())
        assert out == backward


class TestEvidenceRule:
    def setup_method(self):
        self.m = _chain_msgs(3)

    def _sets(self):
        m = self.m
        return (
            {Pattern((m[0], m[1]), origin="C")},
            {Pattern((m[1], m[2]), origin="R")},
        )

    def test_gate_passes_both_directions(self):
        m = self.m
        c, r = evidence_chains(*self._sets(), traces(linear_trace(m)))
        assert tuple(m) in {p.messages for p in c}
        assert tuple(m) in {p.messages for p in r}
        grown = next(p for p in c if len(p) == 3)
        assert grown.support_stats == {"gate_confidence": 1.0}

    def test_forward_gate_fails_backward_passes(self):
        m = self.m
        # a stray first message: forward confidence of (m0, m2) is 1/2
        t = linear_trace(m + [m[0]])
        c, r = evidence_chains(*self._sets(), traces(t))
        assert tuple(m) not in {p.messages for p in c}
        assert tuple(m) in {p.messages for p in r}

    def test_backward_gate_fails_forward_passes(self):
        m = self.m
        t = linear_trace([m[2]] + m)
        c, r = evidence_chains(*self._sets(), traces(t))
        assert tuple(m) in {p.messages for p in c}
        assert tuple(m) not in {p.messages for p in r}

    def test_threshold_mode_averages(self):
        m = self.m
        ts = traces(linear_trace(m), linear_trace(m + [m[0]]))
        c, _ = evidence_chains(*self._sets(), ts)  # exact mode fails
        assert tuple(m) not in {p.messages for p in c}
        c, _ = evidence_chains(*self._sets(), ts, threshold=0.7)
        grown = next(p for p in c if len(p) == 3)
        assert grown.support_stats["gate_confidence"] == 0.75

    def test_gate_on_absent_endpoint(self):
        m = self.m
        # m0 never occurs: both gates are undefined, nothing is added
        t = linear_trace([m[1], m[2]])
        c, r = evidence_chains(*self._sets(), traces(t))
        assert tuple(m) not in {p.messages for p in c}
        assert tuple(m) not in {p.messages for p in r}


class TestChainPatterns:
    def test_needs_traces_for_evidence_rule(self):
        m = _chain_msgs(3)
        with pytest.raises(ValueError, match="evidence rule"):
            chain_patterns({Pattern((m[0], m[1]), origin="C")}, set(), None)

    def test_rule_order(self):
        m = _chain_msgs(4)
        # C covers the head, R covers the tail; only the evidence rule can
        # join them into the full chain
        forward = {Pattern((m[0], m[1]), origin="C"), Pattern((m[1], m[2]), origin="C")}
        backward = {Pattern((m[2], m[3]), origin="R")}
        ts = traces(linear_trace(m))
        c, r = chain_patterns(forward, backward, ts)
        assert tuple(m) in {p.messages for p in c}
        c, r = chain_patterns(forward, backward, ts, evidence_rule=False)
        assert tuple(m) not in {p.messages for p in c}
        assert tuple(m) not in {p.messages for p in r}

    def test_without_evidence_rule_traces_optional(self):
        m = _chain_msgs(3)
        forward = {Pattern((m[0], m[1]), origin="C"), Pattern((m[1], m[2]), origin="C")}
        c, r = chain_patterns(forward, set(), evidence_rule=False)
        assert tuple(m) in {p.messages for p in c}
        assert r == set()
