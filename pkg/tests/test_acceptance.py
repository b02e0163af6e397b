"""End-to-end acceptance gate.

One test per guaranteed behavior of the package; each prints a single
PASS line with the measured quantities so the suite output doubles as an
acceptance report.
"""

import itertools
import json
import random
import time

import networkx as nx
import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from cogmaps import fixtures, formats, graphops, pipeline
from cogmaps.cli import main as cli_main
from cogmaps.decisions import (
    AutoProvider,
    DecisionProvider,
    DecisionTranscript,
    ScriptedProvider,
    UnansweredDecision,
    replay,
    verify_replay,
)
from cogmaps.emm import run_algorithm1, transform_rule
from cogmaps.model import InfluenceArc, Sign, ValueLiteral, validate_emm, validate_tree
from cogmaps.service import create_app
from cogmaps.tree import ProgressStall, PruneEvent, build_value_tree

from conftest import GOLDEN
from helpers import make_vcm, parse_dot, random_emm, random_vcm


# --- 1. the four-rule transformation table ---------------------------------

def test_acceptance_rule_table_exhaustive():
    # independently written expectation: (sign, end negated) ->
    # (end valence flips?, mean valence)
    expected = {
        ("+", False): (False, False),
        ("+", True): (True, True),
        ("-", False): (False, True),
        ("-", True): (True, False),
    }
    arcs = {"+": InfluenceArc("x", "y", Sign.POSITIVE), "-": InfluenceArc("x", "y", Sign.NEGATIVE)}
    for (sign, end_neg), (want_end_neg, want_mean_neg) in expected.items():
        _, end, mean = transform_rule(arcs[sign], end_neg)
        assert end == ValueLiteral("y", want_end_neg)
        assert mean == ValueLiteral("x", want_mean_neg)
    print("PASS: rule table exhaustive over all 4 sign/valence combinations")


# --- 2. termination and structural invariants on random maps ---------------

def test_acceptance_random_maps_terminate_with_invariants():
    rng = random.Random(2024)
    n_maps = 200
    start = time.monotonic()
    max_ratio = 0.0
    for _ in range(n_maps):
        vcm = random_vcm(rng, max_nodes=12, extra_arc_factor=1.5)
        t = DecisionTranscript()
        emm, trace = run_algorithm1(vcm, AutoProvider(), t)
        bound = len(vcm.nodes) + len(vcm.arcs)
        waves = max((e.wave for e in trace.rule_events()), default=0)
        assert waves <= bound
        max_ratio = max(max_ratio, waves / bound)
        # irreflexive, acyclic, weakly connected, fundamental the unique source
        assert validate_emm(emm) == []
        assert emm.fundamental == "x0"
    elapsed = time.monotonic() - start
    assert elapsed < 10.0
    print(
        f"PASS: {n_maps} random maps transformed in {elapsed:.2f}s "
        f"(< 10s), wave bound respected (max ratio {max_ratio:.2f}), all results valid"
    )


# --- 3. determinism ---------------------------------------------------------

def test_acceptance_two_runs_are_byte_identical():
    rng = random.Random(77)
    n_maps = 50
    for _ in range(n_maps):
        vcm = random_vcm(rng, max_nodes=10, extra_arc_factor=1.5)
        outs = []
        for _ in range(2):
            emm, trace = run_algorithm1(vcm, AutoProvider(), DecisionTranscript())
            outs.append((formats.emit_map(formats.from_emm(emm)), pipeline.emit_emm_trace(trace)))
        assert outs[0] == outs[1]
    print(f"PASS: {n_maps} random maps transformed twice with byte-identical results and traces")


# --- 4. number of alternative results under tied cycles ---------------------

def enumerate_emms(vcm):
    """Drive every combination of tied-cycle choices to completion."""
    results = set()

    def go(answers):
        try:
            emm, _ = run_algorithm1(vcm, ScriptedProvider(answers, strict=True), DecisionTranscript())
        except UnansweredDecision as e:
            for opt in e.request.options:
                go({**answers, e.request.id: opt})
            return
        results.add(formats.emit_map(formats.from_emm(emm)))

    go({})
    return results


def test_acceptance_tied_cycle_choice_counts():
    one_cycle = make_vcm(
        [("a", "x0", "+"), ("b", "x0", "+"), ("a", "b", "+"), ("b", "a", "+")], "x0"
    )
    two_cycles = make_vcm(
        [
            ("a", "x0", "+"), ("b", "x0", "+"), ("a", "b", "+"), ("b", "a", "+"),
            ("c", "x0", "+"), ("d", "x0", "+"), ("c", "d", "+"), ("d", "c", "+"),
        ],
        "x0",
    )
    n1 = len(enumerate_emms(one_cycle))
    n2 = len(enumerate_emms(two_cycles))
    assert n1 == 2
    assert n2 == 4
    print(f"PASS: one tied cycle yields {n1} distinct results, two independent tied cycles yield {n2}")


# --- 5. shortest-path engine vs independent oracles -------------------------

def path_masks(n, src, dst):
    """All simple src->dst paths over the complete digraph on n nodes, as
    (arc bitmask, length) pairs. The oracle for a concrete graph g is then
    min(length) over the paths with g & mask == mask."""
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    out = []
    mids = [x for x in range(n) if x not in (src, dst)]
    for k in range(len(mids) + 1):
        for mid in itertools.permutations(mids, k):
            seq = [src, *mid, dst]
            mask = 0
            for u, v in zip(seq, seq[1:]):
                mask |= 1 << pairs.index((u, v))
            out.append((mask, len(seq) - 1))
    return pairs, out


def test_acceptance_shortest_path_exhaustive_and_random():
    import numpy as np

    # exhaustive over every digraph on 2..4 nodes, every ordered pair
    for n in (2, 3, 4):
        pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
        endpoints = [(s, d) for s in range(n) for d in range(n) if s != d]
        tables = {e: path_masks(n, *e)[1] for e in endpoints}
        for g in range(1 << len(pairs)):
            arcs = {pairs[i] for i in range(len(pairs)) if g >> i & 1}
            for (s, d), paths in tables.items():
                want = min((ln for mask, ln in paths if g & mask == mask), default=None)
                assert graphops.shortest_path_length(set(range(n)), arcs, s, d) == want

    # exhaustive over all 2^20 digraphs on 5 nodes for the 0 -> 4 pair,
    # against a vectorized path-enumeration oracle
    pairs, paths = path_masks(5, 0, 4)
    gs = np.arange(1 << 20, dtype=np.uint32)
    oracle = np.full(1 << 20, 99, dtype=np.uint8)
    for mask, ln in paths:
        usable = (gs & mask) == mask
        np.minimum(oracle, np.where(usable, ln, 99).astype(np.uint8), out=oracle)
    nodes = set(range(5))
    for g in range(1 << 20):
        arcs = {pairs[i] for i in range(20) if g >> i & 1}
        got = graphops.shortest_path_length(nodes, arcs, 0, 4)
        want = None if oracle[g] == 99 else int(oracle[g])
        assert got == want, (arcs, got, want)

    # random: 500 graphs up to 8 nodes, all ordered pairs, against networkx
    rng = random.Random(5)
    for _ in range(500):
        n = rng.randint(2, 8)
        ns = set(range(n))
        arcs = {(u, v) for u in ns for v in ns if u != v and rng.random() < 0.25}
        g = nx.DiGraph()
        g.add_nodes_from(ns)
        g.add_edges_from(arcs)
        lengths = dict(nx.all_pairs_shortest_path_length(g))
        for u in ns:
            for v in ns:
                assert graphops.shortest_path_length(ns, arcs, u, v) == lengths[u].get(v)
    print("PASS: shortest paths match the path-enumeration oracle on every digraph "
          "up to 5 nodes (2^20 at n=5) and networkx on 500 random graphs")


# --- 6. first bundled case study, end to end --------------------------------

KURDISH_TREE_ARCS = {
    ("democracy_welfare", "peace"),
    ("peace", "international_stability"),
    ("peace", "peace_process"),
    ("peace", "merged:economic_problems+humanitarian_problems+legal_problems"),
    ("peace_process", "rationality"),
    ("peace_process", "realism"),
    ("merged:economic_problems+humanitarian_problems+legal_problems", "kurdish_conflict"),
    ("kurdish_conflict", "merged:~assimilative_policies+~counter_terrorism"),
    ("merged:~assimilative_policies+~counter_terrorism", "~nation_state"),
}


def run_fixture(name):
    doc = formats.parse_map(fixtures.read(f"{name}.cm.map.json"))
    mapping = formats.parse_value_mapping(fixtures.read(f"{name}.mapping.json"))
    answers = formats.parse_decision_script(fixtures.read(f"{name}.decisions.json"))
    return pipeline.run_pipeline(doc, ScriptedProvider(answers, strict=True), mapping)


def test_acceptance_first_case_study_end_to_end():
    result = run_fixture("kurdish")
    assert result.stage == "vt_done"
    tree = formats.to_tree(result.tree_doc)
    assert tree.root == "democracy_welfare"
    assert len(tree.nodes) == 10
    assert tree.arcs == frozenset(KURDISH_TREE_ARCS)
    merged1 = tree.node("merged:economic_problems+humanitarian_problems+legal_problems")
    assert merged1.label == "valuing resolving general problems"
    merged2 = tree.node("merged:~assimilative_policies+~counter_terrorism")
    assert merged2.label == "valuing elimination of oppressing policies"
    assert tree.node("~nation_state").label == "not valuing nation state"
    assert formats.emit_map(result.tree_doc) == (GOLDEN / "kurdish_tree.map.json").read_text()
    assert validate_tree(tree) == []
    print("PASS: first case study produces the expected 10-node tree with both merges, byte-equal to golden")


# --- 7. second bundled case study: prune-only resolution --------------------

TURKISH_EXPECTED_DROPS = {
    ("counterterrorism", "unitary_state"),
    ("reducing_pkk", "citizenship"),
    ("reducing_pkk", "free_speech"),
    ("reducing_pkk", "human_rights"),
    ("reducing_pkk", "local_government"),
    ("reducing_pkk", "mother_tongue"),
    ("reducing_pkk", "parliament"),
    ("reducing_pkk", "political_freedom"),
    ("reducing_pkk", "social_justice"),
    ("reducing_pkk", "~unemployment"),
}


def test_acceptance_second_case_study_prunes_without_questions():
    result = run_fixture("turkish")
    assert result.stage == "vt_done"
    assert result.transcript.entries == []  # zero client decisions needed
    prunes = [e for e in result.tree_trace.events if isinstance(e, PruneEvent)]
    assert len(prunes) == 10
    dropped = {arc for e in prunes for arc in e.dropped}
    assert dropped == TURKISH_EXPECTED_DROPS
    tree = formats.to_tree(result.tree_doc)
    assert len(tree.nodes) == 18 and len(tree.arcs) == 17
    assert formats.emit_map(result.tree_doc) == (GOLDEN / "turkish_tree.map.json").read_text()
    print("PASS: second case study resolved by exactly 10 shortest-path prunes with no client questions")


# --- 8. tree construction on random maps ------------------------------------

class RandomAnswers(DecisionProvider):
    source = "script"

    def __init__(self, rng):
        self.rng = rng

    def answer(self, request):
        if request.options:
            return self.rng.choice(request.options)
        return f"merged value {self.rng.randint(0, 999)}"


def test_acceptance_random_trees_are_arborescences_or_stall():
    rng = random.Random(404)
    n_maps, stalls = 200, 0
    for _ in range(n_maps):
        emm = random_emm(rng)
        try:
            vt, _ = build_value_tree(emm, RandomAnswers(rng), DecisionTranscript())
        except ProgressStall:
            stalls += 1
            continue
        assert validate_tree(vt) == []
    assert n_maps - stalls > 150  # the guard must stay the exception
    print(
        f"PASS: {n_maps - stalls}/{n_maps} random maps became valid trees under random answers "
        f"(stall guard rate {stalls / n_maps:.1%})"
    )


# --- 9. transcript replay ----------------------------------------------------

def test_acceptance_replay_reproduces_artifacts_byte_for_byte():
    first = run_fixture("kurdish")
    second = pipeline.run_pipeline(
        formats.parse_map(fixtures.read("kurdish.cm.map.json")),
        replay(first.transcript),
        formats.parse_value_mapping(fixtures.read("kurdish.mapping.json")),
    )
    verify_replay(first.transcript, second.transcript)
    for stage in ("vcm", "emm", "tree"):
        assert formats.emit_map(first.artifacts()[stage]) == formats.emit_map(second.artifacts()[stage])

    # the same must hold for runs that went through cycle decisions
    rng = random.Random(9)
    replayed = 0
    for _ in range(50):
        vcm = random_vcm(rng, max_nodes=10, extra_arc_factor=2.0)
        t1 = DecisionTranscript()
        emm1, _ = run_algorithm1(vcm, AutoProvider(), t1)
        if not t1.entries:
            continue
        t2 = DecisionTranscript()
        emm2, _ = run_algorithm1(vcm, replay(t1), t2)
        verify_replay(t1, t2)
        assert formats.emit_map(formats.from_emm(emm1)) == formats.emit_map(formats.from_emm(emm2))
        replayed += 1
    assert replayed > 0
    print(f"PASS: case-study replay byte-identical; {replayed} random cycle-bearing runs replayed identically")


# --- 10. serialization fixpoints and DOT ------------------------------------

def test_acceptance_serialization_fixpoint_and_dot_well_formed():
    docs = sorted(GOLDEN.glob("*.map.json")) + [
        fixtures.path("kurdish.cm.map.json"),
        fixtures.path("turkish.cm.map.json"),
    ]
    assert len(docs) >= 8
    for path in docs:
        text = path.read_text()
        doc = formats.parse_map(text)
        emitted = formats.emit_map(doc)
        assert formats.emit_map(formats.parse_map(emitted)) == emitted
        nodes, edges = parse_dot(formats.export_dot(doc))
        assert nodes == {n["id"] for n in doc.nodes}
        assert edges == {(a["from"], a["to"]) for a in doc.arcs}
    print(f"PASS: parse/emit fixpoint and DOT structure check on {len(docs)} documents")


# --- 11. service and CLI produce identical bytes -----------------------------

def test_acceptance_service_and_cli_agree(tmp_path):
    client = TestClient(create_app(tmp_path / "sessions"))
    answers = formats.parse_decision_script(fixtures.read("kurdish.decisions.json"))
    r = client.post(
        "/sessions",
        json={
            "document": json.loads(fixtures.read("kurdish.cm.map.json")),
            "mapping": json.loads(fixtures.read("kurdish.mapping.json")),
        },
    )
    assert r.status_code == 201
    sid = r.json()["id"]
    for _ in range(20):
        state = client.post(f"/sessions/{sid}/advance").json()
        if state["stage"] == "vt_done":
            break
        if state["pending"]:
            rid = state["pending"]["id"]
            client.post(f"/sessions/{sid}/decisions", json={"request_id": rid, "answer": answers[rid]})
    else:
        pytest.fail("service session did not finish")

    out = tmp_path / "cli"
    res = CliRunner().invoke(
        cli_main,
        [
            "pipeline",
            str(fixtures.path("kurdish.cm.map.json")),
            "--mapping", str(fixtures.path("kurdish.mapping.json")),
            "--decisions", str(fixtures.path("kurdish.decisions.json")),
            "--out-dir", str(out),
        ],
    )
    assert res.exit_code == 0, res.output
    for stage in ("vcm", "emm", "tree"):
        assert (
            client.get(f"/sessions/{sid}/artifacts/{stage}").text
            == (out / f"{stage}.map.json").read_text()
        )
    print("PASS: HTTP session and CLI run produce byte-identical artifacts for every stage")
