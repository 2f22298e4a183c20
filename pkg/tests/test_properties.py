"""Randomized properties: hypothesis searches for adversarial cases on
top of the seeded invariant suites."""
import pytest
from hypothesis import given, settings, strategies as st

from msgflow.chaining import chain_overlap
from msgflow.evaluation import is_valid
from msgflow.flows import GroundTruth
from msgflow.mining import sequence_support
from msgflow.model import Message, MessageInstance, Pattern, Trace
from msgflow.postprocess import remove_redundant

import invariants
import oracles


ALPHABET = [Message("u", "v", c) for c in "abcd"]

steps_strategy = st.lists(
    st.lists(st.sampled_from(ALPHABET), min_size=1, max_size=2),
    min_size=1,
    max_size=10,
)

distinct_seq = st.permutations(ALPHABET).map(tuple).flatmap(
    lambda perm: st.integers(min_value=1, max_value=3).map(lambda k: perm[:k])
)


def _trace(steps):
    return Trace(tuple(tuple(MessageInstance(m) for m in step) for step in steps))


class TestSupportProperties:
    @settings(max_examples=300, deadline=None)
    @given(steps=steps_strategy, seq=distinct_seq)
    def test_matches_flow_oracle(self, steps, seq):
        assert sequence_support(seq, _trace(steps)) == oracles.max_disjoint_occurrences(
            steps, seq
        )

    @settings(max_examples=200, deadline=None)
    @given(steps=steps_strategy, seq=distinct_seq)
    def test_monotone_under_extension(self, steps, seq):
        # appending steps can only add occurrences
        t1 = _trace(steps)
        t2 = _trace(steps + steps)
        assert sequence_support(seq, t2) >= sequence_support(seq, t1)


class TestValidityProperties:
    @settings(max_examples=300, deadline=None)
    @given(
        witness=st.permutations(list(range(8))),
        pattern=st.lists(
            st.integers(min_value=0, max_value=9), min_size=2, max_size=5, unique=True
        ),
    )
    def test_matches_all_pairs_oracle(self, witness, pattern):
        def seq(nums):
            return tuple(Message("u", "u", str(n)) for n in nums)

        gt = GroundTruth((seq(witness),))
        assert is_valid(seq(pattern), gt) == oracles.valid_all_pairs(
            seq(pattern), seq(witness)
        )


class TestChainOverlapProperties:
    @settings(max_examples=300, deadline=None)
    @given(
        data=st.lists(st.integers(min_value=0, max_value=7), min_size=4, max_size=10)
    )
    def test_join_shape(self, data):
        # split arbitrary digit soup into two dedup'd halves
        half = len(data) // 2
        s1 = tuple(dict.fromkeys(Message("u", "u", str(d)) for d in data[:half]))
        s2 = tuple(dict.fromkeys(Message("u", "u", str(d)) for d in data[half:]))
        if len(s1) < 2 or len(s2) < 2:
            return
        joined = chain_overlap(s1, s2)
        if joined is None:
            return
        assert len(set(joined)) == len(joined)
        k = len(s1) + len(s2) - len(joined)
        assert 1 <= k <= min(len(s1), len(s2)) - 1
        assert joined == s1 + s2[k:]
        assert s1[-k:] == s2[:k]


class TestPruneProperties:
    @settings(max_examples=300, deadline=None)
    @given(
        seqs=st.lists(
            st.lists(
                st.integers(min_value=0, max_value=5), min_size=2, max_size=5, unique=True
            ),
            min_size=1,
            max_size=8,
        )
    )
    def test_idempotent_and_conservative(self, seqs):
        pats = {Pattern(tuple(Message("u", "u", str(n)) for n in s)) for s in seqs}
        kept = remove_redundant(pats)
        assert kept <= pats
        assert remove_redundant(kept) == kept
        longest = max(len(p) for p in pats)
        assert any(len(p) == longest for p in kept)


@pytest.mark.parametrize("suite", invariants.ALL_SUITES, ids=lambda f: f.__name__)
def test_invariant_suite(suite):
    assert suite(500) == 500
