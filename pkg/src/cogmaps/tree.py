"""Ends-means map -> value tree.

Per-node multiple-predecessor resolution: shortest-path pruning first,
then preference-independence questions deciding between splitting the
successor or merging the tied predecessors, until the graph is an
arborescence rooted at the fundamental value.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from . import decisions, graphops
from .model import (
    EndsMeansMap,
    Provenance,
    TreeNode,
    ValueTree,
    validate_emm,
    validate_tree,
)


@dataclass(frozen=True)
class PredecessorConflict:
    """A node with two or more ends, each annotated with the length of the
    root path running through that predecessor."""

    successor: str
    predecessors: tuple[tuple[str, int], ...]  # (predecessor id, path length through it)
    layer: int

    def __post_init__(self) -> None:
        if len(self.predecessors) < 2:
            raise ValueError("a conflict needs at least two predecessors")


@dataclass(frozen=True)
class PruneEvent:
    successor: str
    dropped: tuple[tuple[str, str], ...]
    kept: tuple[str, ...]


@dataclass(frozen=True)
class SplitEvent:
    successor: str
    copies: tuple[tuple[str, str], ...]  # (predecessor, new node id)
    request_id: str


@dataclass(frozen=True)
class MergeEvent:
    sources: tuple[str, ...]
    merged: str
    label: str
    request_id: str
    label_request_id: str


@dataclass
class TreeTrace:
    events: list = field(default_factory=list)


class ProgressStall(RuntimeError):
    """The conflict count stopped decreasing; merges re-introduced
    conflicts faster than they were resolved."""


def _in_arcs(arcs: set[tuple[str, str]], node: str) -> list[tuple[str, str]]:
    return sorted(a for a in arcs if a[1] == node)


def _conflicts(
    node_ids: set[str], arcs: set[tuple[str, str]], root: str
) -> list[PredecessorConflict]:
    dist = graphops.bfs_distances(node_ids, arcs, root)
    big = len(node_ids) + 1
    out = []
    for n in sorted(node_ids):
        preds = [p for p, _ in _in_arcs(arcs, n)]
        if len(preds) < 2:
            continue
        lengths = tuple((p, dist.get(p, big) + 1) for p in sorted(preds))
        out.append(PredecessorConflict(n, lengths, dist.get(n, big)))
    out.sort(key=lambda c: (c.layer, c.successor))
    return out


def find_conflicts(emm: EndsMeansMap) -> list[PredecessorConflict]:
    """All multiple-predecessor nodes of a valid ends-means map, ordered by
    ascending layer then node id."""
    report = validate_emm(emm)
    if report:
        raise ValueError("invalid ends-means map: " + "; ".join(map(str, report)))
    return _conflicts(emm.node_ids(), set(emm.arcs), emm.fundamental)


def prune_by_shortest_path(conflict: PredecessorConflict) -> tuple[str, ...]:
    """Predecessors achieving the minimal root-path length through them;
    everything longer is to be dropped."""
    best = min(length for _, length in conflict.predecessors)
    return tuple(p for p, length in conflict.predecessors if length == best)


def _independence_request(
    successor: str,
    successor_label: str,
    predecessors: tuple[str, ...],
    pred_labels: list[str],
    ordinal: int,
) -> decisions.DecisionRequest:
    first, rest = pred_labels[0], pred_labels[1:]
    others = ", ".join(f"the preferences about {successor_label} having an impact on {p}" for p in rest)
    prompt = (
        f"Are the preferences about {successor_label} having an impact on "
        f"{first} influenced by {others}?"
    )
    return decisions.DecisionRequest(
        id=decisions.request_id("tree-independence", ordinal, (successor,) + predecessors),
        kind=decisions.KIND_INDEPENDENCE,
        prompt=prompt,
        options=(decisions.INDEPENDENT, decisions.DEPENDENT),
        # the conflicting subgraph, so clients can show it alongside the question
        context=tuple((p, successor) for p in predecessors),
    )


def build_value_tree(
    emm: EndsMeansMap,
    provider: decisions.DecisionProvider,
    transcript: decisions.DecisionTranscript | None = None,
) -> tuple[ValueTree, TreeTrace]:
    """Resolve every multiple-predecessor conflict of ``emm``; the result
    satisfies all arborescence invariants.

    Aborts with ProgressStall when the conflict count fails to strictly
    decrease for as many consecutive rounds as the map initially has nodes.
    """
    report = validate_emm(emm)
    if report:
        raise ValueError("invalid ends-means map: " + "; ".join(map(str, report)))
    if transcript is None:
        transcript = decisions.DecisionTranscript()
    trace = TreeTrace()

    nodes: dict[str, TreeNode] = {
        n.id: TreeNode(n.id, n.label, Provenance("original", (n.id,))) for n in emm.nodes
    }
    arcs: set[tuple[str, str]] = set(emm.arcs)
    root = emm.fundamental

    guard_window = len(nodes)
    best = None
    stalled = 0
    q_ordinal = 0
    label_ordinal = 0

    while True:
        conflicts = _conflicts(set(nodes), arcs, root)
        if not conflicts:
            break
        if best is None or len(conflicts) < best:
            best = len(conflicts)
            stalled = 0
        else:
            stalled += 1
            if stalled > guard_window:
                raise ProgressStall(
                    f"conflict count stuck at {len(conflicts)} for {stalled} rounds "
                    f"(best seen {best})"
                )

        c = conflicts[0]
        survivors = prune_by_shortest_path(c)
        dropped = tuple((p, c.successor) for p, _ in c.predecessors if p not in survivors)
        if dropped:
            arcs.difference_update(dropped)
            trace.events.append(PruneEvent(c.successor, dropped, survivors))
        if len(survivors) == 1:
            continue

        succ = nodes[c.successor]
        req = _independence_request(
            c.successor,
            succ.label,
            tuple(survivors),
            [nodes[p].label for p in survivors],
            q_ordinal,
        )
        q_ordinal += 1
        answer = decisions.ask(provider, transcript, req)

        if answer == decisions.INDEPENDENT:
            # one copy of the successor per surviving predecessor
            out_arcs = sorted(m for e, m in arcs if e == c.successor)
            copies = []
            for p in survivors:
                cid = f"{c.successor}@{p}"
                nodes[cid] = TreeNode(
                    cid,
                    f"{succ.label} for {nodes[p].label}",
                    Provenance("split", (c.successor,), context=p),
                )
                arcs.add((p, cid))
                for m in out_arcs:
                    arcs.add((cid, m))
                copies.append((p, cid))
            arcs = {a for a in arcs if c.successor not in a}
            del nodes[c.successor]
            trace.events.append(SplitEvent(c.successor, tuple(copies), req.id))
        else:
            sources = tuple(sorted(survivors))
            label_req = decisions.DecisionRequest(
                id=decisions.request_id("tree-merge-label", label_ordinal, sources),
                kind=decisions.KIND_MERGE_LABEL,
                prompt=(
                    "Provide a label for the merged node combining: "
                    + ", ".join(nodes[s].label for s in sources)
                ),
                options=(),
            )
            label_ordinal += 1
            label = decisions.ask(provider, transcript, label_req).strip()
            if not label:
                label = "merged: " + " + ".join(nodes[s].label for s in sources)
            mid = "merged:" + "+".join(sources)
            nodes[mid] = TreeNode(mid, label, Provenance("merged", sources, client_label=label))
            new_arcs = set()
            for e, m in arcs:
                e2 = mid if e in sources else e
                m2 = mid if m in sources else m
                if e2 != m2:
                    new_arcs.add((e2, m2))
            arcs = new_arcs
            for s in sources:
                del nodes[s]
            trace.events.append(MergeEvent(sources, mid, label, req.id, label_req.id))

    vt = ValueTree(
        nodes=tuple(sorted(nodes.values(), key=lambda n: n.id)),
        arcs=frozenset(arcs),
        root=root,
        metadata=emm.metadata,
    )
    bad = validate_tree(vt)
    if bad:
        raise RuntimeError("treeification produced a non-arborescence: " + "; ".join(map(str, bad)))
    return vt, trace


def source_literals(tree: ValueTree, node_id: str) -> frozenset[str]:
    """The EMM literal ids a tree node ultimately derives from."""
    seen: set[str] = set()

    def walk(nid: str) -> None:
        prov = tree.node(nid).provenance if nid in tree.node_ids() else None
        if prov is None:
            seen.add(nid)  # source node no longer present: it was a literal id
            return
        if prov.kind == "original":
            seen.add(prov.sources[0])
        else:
            for s in prov.sources:
                if s in tree.node_ids():
                    walk(s)
                else:
                    seen.add(_strip_derived(s))

    walk(node_id)
    return frozenset(seen)


def _strip_derived(node_id: str) -> str:
    if node_id.startswith("merged:"):
        return node_id
    return node_id.split("@", 1)[0]


_STOPWORDS = {"valuing", "not", "the", "of", "and", "a", "an", "to", "for", "on", "in"}


def _stem(token: str) -> str:
    if token.endswith("ies") and len(token) > 4:
        return token[:-3] + "y"
    for suf in ("ing", "es", "ed"):
        if token.endswith(suf) and len(token) - len(suf) >= 4:
            token = token[: -len(suf)]
            break
    if token.endswith("s") and not token.endswith("ss") and len(token) > 4:
        token = token[:-1]
    if token.endswith("acy"):
        token = token[:-2]
    elif token.endswith("atic"):
        token = token[:-3]
    return token


def label_tokens(label: str) -> frozenset[str]:
    words = re.findall(r"[a-z0-9]+", label.lower())
    return frozenset(_stem(w) for w in words if w not in _STOPWORDS)


@dataclass(frozen=True)
class ComparisonPair:
    node_a: str
    node_b: str
    label_a: str
    label_b: str
    similarity: float
    depth_a: int
    depth_b: int


def compare_trees(
    a: ValueTree, b: ValueTree, threshold: float = 0.25
) -> list[ComparisonPair]:
    """Candidate common-ground pairs between two stakeholders' trees:
    label-similar nodes with their root distances. No judgment, only
    candidates for the analyst."""
    for t in (a, b):
        bad = validate_tree(t)
        if bad:
            raise ValueError("invalid tree: " + "; ".join(map(str, bad)))
    da = graphops.bfs_distances(a.node_ids(), a.arcs, a.root)
    db = graphops.bfs_distances(b.node_ids(), b.arcs, b.root)
    pairs = []
    for na in sorted(a.nodes, key=lambda n: n.id):
        ta = label_tokens(na.label)
        for nb in sorted(b.nodes, key=lambda n: n.id):
            if na.label.strip().lower() == nb.label.strip().lower():
                sim = 1.0
            else:
                tb = label_tokens(nb.label)
                union = ta | tb
                sim = len(ta & tb) / len(union) if union else 0.0
            if sim >= threshold:
                pairs.append(
                    ComparisonPair(na.id, nb.id, na.label, nb.label, round(sim, 4), da[na.id], db[nb.id])
                )
    pairs.sort(key=lambda p: (-p.similarity, p.node_a, p.node_b))
    return pairs
