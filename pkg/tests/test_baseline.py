import numpy as np
import pytest

from msgflow.baseline import (
    AlternatingMiner,
    ConcurrentStepError,
    chain_alternating,
    mine_alternating,
)
from msgflow.model import Message, Pattern

import oracles
from conftest import linear_trace, msgs, step_trace, traces


class TestMineAlternating:
    def test_strict_alternation_qualifies(self, abc):
        a, b, _ = abc
        pairs = mine_alternating(traces(linear_trace([a, b, a, b])))
        assert (a, b) in pairs
        assert (b, a) not in pairs

    def test_count_mismatch_vetoes(self, abc):
        a, b, _ = abc
        pairs = mine_alternating(traces(linear_trace([a, a, b, a, b])))
        assert (a, b) not in pairs

    def test_order_violation_vetoes(self, abc):
        a, b, _ = abc
        # equal counts but b b a a breaks the alternation shape
        pairs = mine_alternating(traces(linear_trace([b, b, a, a])))
        assert (a, b) not in pairs and (b, a) not in pairs

    def test_pair_must_occur_somewhere(self, abc):
        a, b, c = abc
        # c absent everywhere: no (c, *) pairs can qualify
        pairs = mine_alternating(traces(linear_trace([a, b])))
        assert all(c not in p for p in pairs)

    def test_veto_is_global_across_traces(self, abc):
        a, b, _ = abc
        ok = linear_trace([a, b])
        bad = linear_trace([a, a, b])
        assert (a, b) in mine_alternating(traces(ok))
        assert (a, b) not in mine_alternating(traces(ok, bad))

    def test_missing_from_one_trace_is_fine(self, abc):
        a, b, c = abc
        pairs = mine_alternating(traces(linear_trace([a, b]), linear_trace([c, c])))
        assert (a, b) in pairs

    def test_concurrent_step_rejected(self, abc):
        a, b, _ = abc
        with pytest.raises(ConcurrentStepError, match="step"):
            mine_alternating(traces(step_trace([[a, b]], tid="t9")))


class TestChainAlternating:
    def test_triangle_chains(self, abc):
        a, b, c = abc
        pairs = {(a, b), (a, c), (b, c)}
        out = chain_alternating(pairs)
        assert {p.messages for p in out} == {(a, b, c)}
        assert all(p.origin == "ALT" for p in out)

    def test_no_transitive_closure_without_support(self, abc):
        a, b, c = abc
        # (a, c) missing: the chain stops at pairs
        out = chain_alternating({(a, b), (b, c)})
        assert {p.messages for p in out} == {(a, b), (b, c)}

    def test_subsequences_of_results_dropped(self, abc):
        a, b, c = abc
        out = chain_alternating({(a, b), (a, c), (b, c)})
        # (a, b) etc. are order-preserving subsequences of (a, b, c)
        assert all(len(p) == 3 for p in out)

    def test_empty(self):
        assert chain_alternating(set()) == set()

    @pytest.mark.parametrize("seed", range(10))
    def test_matches_permutation_oracle(self, seed):
        rng = np.random.default_rng(seed)
        alphabet = msgs("a", "b", "c", "d", "e")
        pairs = {
            (x, y)
            for x in alphabet
            for y in alphabet
            if x != y and rng.random() < 0.3
        }
        got = {p.messages for p in chain_alternating(pairs)}
        want = oracles.alternating_chains_oracle(pairs, alphabet)
        assert got == want


class TestAlternatingMiner:
    def test_fit_attributes(self, abc):
        a, b, c = abc
        ts = traces(linear_trace([a, b, c, a, b, c]))
        est = AlternatingMiner().fit(ts)
        assert (a, b) in est.pairs_
        assert {p.messages for p in est.patterns_} == {(a, b, c)}
        assert est.alphabet_ == {a, b, c}

    def test_fit_predict(self, abc):
        a, b, c = abc
        ts = traces(linear_trace([a, b, c, a, b, c]))
        assert AlternatingMiner().fit_predict(ts) == AlternatingMiner().fit(ts).patterns_

    def test_interleaving_starves_the_baseline(self, abc):
        a, b, c = abc
        # two interleaved executions of (a, b, c)
        ts = traces(linear_trace([a, a, b, b, c, c]))
        est = AlternatingMiner().fit(ts)
        assert est.patterns_ == set()
