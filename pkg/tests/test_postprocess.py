from msgflow.model import Message, Pattern
from msgflow.postprocess import merge_patterns, remove_redundant


def _p(*cmds, origin="", stats=None):
    return Pattern(
        tuple(Message("u", "v", c) for c in cmds), origin=origin, support_stats=stats
    )


class TestRemoveRedundant:
    def test_prefix_dropped(self):
        kept = remove_redundant({_p("a", "b"), _p("a", "b", "c")})
        assert kept == {_p("a", "b", "c")}

    def test_suffix_dropped(self):
        kept = remove_redundant({_p("b", "c"), _p("a", "b", "c")})
        assert kept == {_p("a", "b", "c")}

    def test_general_subsequence_survives(self):
        # (a, c) skips b: neither prefix nor suffix of (a, b, c), so it
        # carries distinct branch information and is kept
        kept = remove_redundant({_p("a", "c"), _p("a", "b", "c")})
        assert kept == {_p("a", "c"), _p("a", "b", "c")}

    def test_middle_infix_survives(self):
        kept = remove_redundant({_p("b", "c"), _p("a", "b", "c", "d")})
        assert kept == {_p("b", "c"), _p("a", "b", "c", "d")}

    def test_chain_of_shadows(self):
        pats = {_p("a", "b"), _p("a", "b", "c"), _p("a", "b", "c", "d")}
        assert remove_redundant(pats) == {_p("a", "b", "c", "d")}

    def test_unrelated_all_kept(self):
        pats = {_p("a", "b"), _p("c", "d")}
        assert remove_redundant(pats) == pats

    def test_empty_and_single(self):
        assert remove_redundant(set()) == set()
        assert remove_redundant({_p("a", "b")}) == {_p("a", "b")}


class TestMergePatterns:
    def test_disjoint_keep_origins(self):
        merged = merge_patterns({_p("a", "b")}, {_p("b", "c")})
        by_seq = {p.messages: p.origin for p in merged}
        assert by_seq[_p("a", "b").messages] == "C"
        assert by_seq[_p("b", "c").messages] == "R"

    def test_collapse_to_cr(self):
        f = _p("a", "b", stats={"confidence": 1.0, "defined_traces": 3})
        b = _p("a", "b", stats={"confidence": 0.9, "defined_traces": 2})
        merged = merge_patterns({f}, {b})
        assert len(merged) == 1
        (p,) = merged
        assert p.origin == "CR"
        # forward-side stats win on collapse
        assert p.support_stats == {"confidence": 1.0, "defined_traces": 3}

    def test_empty_sides(self):
        assert merge_patterns(set(), set()) == set()
        merged = merge_patterns(set(), {_p("a", "b")})
        assert next(iter(merged)).origin == "R"
