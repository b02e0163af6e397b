import pytest

from cogmaps.decisions import (
    DecisionTranscript,
    ScriptedProvider,
    UnansweredDecision,
)
from cogmaps.model import EmmNode, EndsMeansMap, validate_tree
from cogmaps.tree import (
    MergeEvent,
    PruneEvent,
    SplitEvent,
    build_value_tree,
    compare_trees,
    find_conflicts,
    label_tokens,
    prune_by_shortest_path,
    source_literals,
)


def emm(arcs, fundamental="r"):
    ids = sorted({a for arc in arcs for a in arc} | {fundamental})
    return EndsMeansMap(
        nodes=tuple(EmmNode(i, i.lstrip("~"), i.startswith("~"), f"valuing {i}") for i in ids),
        arcs=frozenset(arcs),
        fundamental=fundamental,
    )


def build(m, answers=None, strict=True):
    t = DecisionTranscript()
    vt, trace = build_value_tree(m, ScriptedProvider(answers or {}, strict=strict), t)
    return vt, trace, t


def probe_request(m, answers=None):
    with pytest.raises(UnansweredDecision) as e:
        build(m, answers)
    return e.value.request


def test_find_conflicts_ordering_and_path_lengths():
    m = emm({("r", "a"), ("r", "b"), ("a", "c"), ("b", "c"), ("a", "d"), ("c", "d")})
    cs = find_conflicts(m)
    assert [(c.successor, c.layer) for c in cs] == [("c", 2), ("d", 2)]
    assert dict(cs[0].predecessors) == {"a": 2, "b": 2}
    assert dict(cs[1].predecessors) == {"a": 2, "c": 3}


def test_prune_keeps_only_shortest_root_paths():
    m = emm({("r", "a"), ("a", "b"), ("r", "c"), ("b", "c")})
    (c,) = find_conflicts(m)
    assert prune_by_shortest_path(c) == ("r",)
    vt, trace, t = build(m)
    assert not t.entries  # pruning needs no client input
    assert isinstance(trace.events[0], PruneEvent)
    assert trace.events[0].dropped == (("b", "c"),)
    assert vt.arcs == {("r", "a"), ("a", "b"), ("r", "c")}
    assert validate_tree(vt) == []


def test_tied_predecessors_ask_independence_question():
    m = emm({("r", "a"), ("r", "b"), ("a", "c"), ("b", "c")})
    req = probe_request(m)
    assert req.options == ("independent", "dependent")
    assert "valuing c" in req.prompt


def test_independent_answer_splits_successor_per_predecessor():
    m = emm({("r", "a"), ("r", "b"), ("a", "c"), ("b", "c"), ("c", "d")})
    req = probe_request(m)
    # the split copies inherit c's outgoing arc, which turns d into a
    # fresh tie needing a second answer
    req2 = probe_request(m, {req.id: "independent"})
    vt, trace, _ = build(m, {req.id: "independent", req2.id: "independent"})
    split = next(e for e in trace.events if isinstance(e, SplitEvent))
    assert split.successor == "c"
    assert dict(split.copies) == {"a": "c@a", "b": "c@b"}
    assert vt.node("c@a").label == "valuing c for valuing a"
    assert vt.node("c@a").provenance.kind == "split"
    assert vt.node("c@a").provenance.context == "a"
    assert "c" not in vt.node_ids()
    assert validate_tree(vt) == []


def test_dependent_answer_merges_predecessors_with_client_label():
    m = emm({("r", "a"), ("r", "b"), ("a", "c"), ("b", "c"), ("a", "d")})
    req = probe_request(m)
    label_req = probe_request(m, {req.id: "dependent"})
    assert label_req.kind == "merge_label"
    vt, trace, _ = build(m, {req.id: "dependent", label_req.id: "valuing a and b"})
    merge = next(e for e in trace.events if isinstance(e, MergeEvent))
    assert merge.sources == ("a", "b")
    assert merge.merged == "merged:a+b"
    mid = "merged:a+b"
    assert vt.node(mid).label == "valuing a and b"
    assert vt.node(mid).provenance.kind == "merged"
    assert vt.node(mid).provenance.sources == ("a", "b")
    assert {"a", "b"} & vt.node_ids() == set()
    assert vt.arcs == {("r", mid), (mid, "c"), (mid, "d")}
    assert validate_tree(vt) == []


def test_blank_merge_label_gets_generated_fallback():
    m = emm({("r", "a"), ("r", "b"), ("a", "c"), ("b", "c")})
    req = probe_request(m)
    vt, _, t = build(m, {req.id: "dependent"}, strict=False)
    assert vt.node("merged:a+b").label == "merged: valuing a + valuing b"
    assert any(e.source == "auto" for e in t.entries)


def test_split_then_downstream_conflict_resolution():
    m = emm({("r", "a"), ("r", "b"), ("a", "c"), ("b", "c"), ("c", "d")})
    req = probe_request(m)
    req2 = probe_request(m, {req.id: "independent"})
    # d now has predecessors c@a and c@b at equal depth
    vt, _, _ = build(m, {req.id: "independent", req2.id: "independent"})
    assert {"d@c@a", "d@c@b"} <= vt.node_ids()
    assert validate_tree(vt) == []


def test_source_literals_through_merges_and_splits():
    m = emm({("r", "a"), ("r", "b"), ("a", "c"), ("b", "c")})
    req = probe_request(m)
    vt, _, _ = build(m, {req.id: "dependent"}, strict=False)
    assert source_literals(vt, "merged:a+b") == {"a", "b"}
    assert source_literals(vt, "r") == {"r"}


def test_label_tokens_strip_stopwords_and_inflection():
    assert label_tokens("valuing democratic institutions") == label_tokens("democracy institution")
    assert label_tokens("valuing peace") == {"peace"}
    assert "valuing" not in label_tokens("valuing the peace")


def test_compare_trees_scores_and_threshold():
    a, _, _ = build(emm({("r", "a"), ("a", "b")}))
    b, _, _ = build(emm({("r", "a"), ("a", "c")}))
    pairs = compare_trees(a, b, threshold=0.25)
    exact = [p for p in pairs if p.similarity == 1.0]
    assert {(p.node_a, p.node_b) for p in exact} == {("r", "r"), ("a", "a")}
    assert all(p.similarity >= 0.25 for p in pairs)
    assert pairs == sorted(pairs, key=lambda p: (-p.similarity, p.node_a, p.node_b))


def test_compare_rejects_invalid_tree():
    vt, _, _ = build(emm({("r", "a")}))
    from cogmaps.model import ValueTree

    broken = ValueTree(vt.nodes, frozenset({("a", "r")}), vt.root)
    with pytest.raises(ValueError):
        compare_trees(vt, broken)
