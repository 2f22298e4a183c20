import pytest
from sklearn.base import clone
from sklearn.pipeline import Pipeline

from msgflow.datasets import available, fixture_path, load_flows, load_shared_hub
from msgflow.flows import ground_truth
from msgflow.generator import GenConfig, generate
from msgflow.miner import PatternMiner, mine
from msgflow.model import Message
from msgflow.slicing import TraceSlicer

from conftest import linear_trace, traces


def _chain(n):
    return [Message(f"n{i}", f"n{i+1}", f"m{i}") for i in range(n)]


class TestPatternMiner:
    def test_fit_populates_attributes(self):
        m = _chain(3)
        est = PatternMiner().fit(traces(linear_trace(m), linear_trace(m)))
        assert {p.messages for p in est.binary_forward_} == {(m[0], m[1]), (m[1], m[2])}
        assert {p.messages for p in est.patterns_} == {(m[0], m[1], m[2])}
        assert est.alphabet_ == frozenset(m)
        (p,) = est.patterns_
        assert p.origin == "CR"

    def test_prune_disabled_keeps_binaries(self):
        m = _chain(3)
        est = PatternMiner(prune_redundant=False).fit(traces(linear_trace(m)))
        assert {p.messages for p in est.patterns_} == {
            (m[0], m[1]),
            (m[1], m[2]),
            (m[0], m[1], m[2]),
        }

    def test_mine_function_parity(self):
        m = _chain(3)
        ts = traces(linear_trace(m))
        assert mine(ts) == PatternMiner().fit_predict(ts)

    def test_param_validation_happens_at_fit(self):
        m = _chain(2)
        ts = traces(linear_trace(m))
        with pytest.raises(ValueError, match="confidence"):
            PatternMiner(confidence=0.0).fit(ts)
        with pytest.raises(ValueError, match="causality"):
            PatternMiner(causality="bogus").fit(ts)

    def test_sklearn_protocol(self):
        est = PatternMiner(confidence=0.9, jobs=2)
        params = est.get_params()
        assert params["confidence"] == 0.9 and params["jobs"] == 2
        cloned = clone(est)
        assert cloned.get_params() == params
        est.set_params(confidence=1.0)
        assert est.confidence == 1.0

    def test_shared_hub_needs_evidence_rule(self):
        gt = ground_truth(load_shared_hub())
        ts, _ = generate(gt, GenConfig(mode="sm-i", instances_per_pattern=5, num_traces=50, seed=7))
        with_rule = PatternMiner().fit_predict(ts)
        without = PatternMiner(evidence_rule=False).fit_predict(ts)
        longs = {p.messages for p in with_rule if len(p) == 3}
        assert longs == set(gt.sequences)
        assert all(len(p) == 2 for p in without)


class TestPipelines:
    def test_slice_then_mine(self):
        gt = ground_truth(load_shared_hub())
        cfg = GenConfig(
            mode="mm-i",
            instances_per_pattern=3,
            num_traces=30,
            seed=2,
            max_batch=3,
            address_mode="per-instance",
            address_pool=8,
        )
        ts, _ = generate(gt, cfg)
        pipe = Pipeline([("slice", TraceSlicer()), ("mine", PatternMiner())])
        got = pipe.fit_predict(ts)
        assert set(gt.sequences) <= {p.messages for p in got}

    def test_pipeline_clone(self):
        pipe = Pipeline([("slice", TraceSlicer(policy="drop")), ("mine", PatternMiner(jobs=2))])
        cloned = clone(pipe)
        assert cloned.get_params()["slice__policy"] == "drop"
        assert cloned.get_params()["mine__jobs"] == 2


class TestDatasets:
    def test_available(self):
        assert set(available()) == {"cpu_write", "shared_hub", "soc10"}

    def test_fixture_paths_exist(self):
        for name in available():
            assert fixture_path(name).is_file()

    def test_load_flows_unknown(self):
        with pytest.raises(KeyError):
            load_flows("nope")
