"""Domain types shared by every pipeline stage.

All types here are frozen dataclasses: once constructed they are safe to
share between threads, and every transformation builds a new map rather
than mutating one in place.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from . import graphops


class Sign(enum.Enum):
    POSITIVE = "+"
    NEGATIVE = "-"


@dataclass(frozen=True)
class Node:
    """A concept or value node. ``negated_label`` overrides the default
    "not <label>" display text of the node's negation."""

    id: str
    label: str
    negated_label: str | None = None


@dataclass(frozen=True)
class InfluenceArc:
    src: str
    dst: str
    sign: Sign


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    subjects: tuple[str, ...] = ()

    def __str__(self) -> str:
        return f"[{self.code}] {self.message}"


@dataclass(frozen=True)
class CognitiveMap:
    """Signed influence digraph over concepts."""

    nodes: tuple[Node, ...]
    arcs: frozenset[InfluenceArc]
    metadata: tuple[tuple[str, str], ...] = ()

    def node_ids(self) -> set[str]:
        return {n.id for n in self.nodes}

    def node(self, node_id: str) -> Node:
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise KeyError(node_id)

    def labels(self) -> dict[str, str]:
        return {n.id: n.label for n in self.nodes}

    def arc_pairs(self) -> set[tuple[str, str]]:
        return {(a.src, a.dst) for a in self.arcs}


@dataclass(frozen=True)
class ValueCognitiveMap(CognitiveMap):
    """Cognitive map over values with a designated fundamental value."""

    fundamental: str = ""


@dataclass(frozen=True)
class ValueLiteral:
    """A value identity plus valence (affirmed or negated)."""

    base: str
    negated: bool = False

    @property
    def key(self) -> str:
        return f"~{self.base}" if self.negated else self.base


def negate(literal: ValueLiteral) -> ValueLiteral:
    """Flip the valence of a literal; involutive."""
    return ValueLiteral(literal.base, not literal.negated)


def literal_label(node: Node, negated: bool) -> str:
    if not negated:
        return node.label
    if node.negated_label is not None:
        return node.negated_label
    return f"not {node.label}"


@dataclass(frozen=True)
class EmmNode:
    id: str
    base: str
    negated: bool
    label: str

    @property
    def literal(self) -> ValueLiteral:
        return ValueLiteral(self.base, self.negated)


@dataclass(frozen=True)
class EndsMeansMap:
    """Value literals plus unsigned ends-means arcs, stored end -> mean."""

    nodes: tuple[EmmNode, ...]
    arcs: frozenset[tuple[str, str]]
    fundamental: str
    # bases for which both valences survived construction
    dual_valence_bases: frozenset[str] = frozenset()
    metadata: tuple[tuple[str, str], ...] = ()

    def node_ids(self) -> set[str]:
        return {n.id for n in self.nodes}

    def node(self, node_id: str) -> EmmNode:
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise KeyError(node_id)

    def labels(self) -> dict[str, str]:
        return {n.id: n.label for n in self.nodes}


@dataclass(frozen=True)
class Provenance:
    """Where a value-tree node came from.

    kind 'original' carries the single source literal id; 'merged' carries
    two or more source node ids plus the client-supplied label; 'split'
    carries the source node id and the predecessor context that motivated
    the split.
    """

    kind: str  # original | merged | split
    sources: tuple[str, ...]
    context: str | None = None
    client_label: str | None = None

    def __post_init__(self) -> None:
        if self.kind == "merged" and len(self.sources) < 2:
            raise ValueError("merged provenance needs >= 2 sources")
        if self.kind == "split" and self.context is None:
            raise ValueError("split provenance needs a predecessor context")


@dataclass(frozen=True)
class TreeNode:
    id: str
    label: str
    provenance: Provenance


@dataclass(frozen=True)
class ValueTree:
    """Arborescence over (possibly merged/split) value nodes."""

    nodes: tuple[TreeNode, ...]
    arcs: frozenset[tuple[str, str]]  # (parent, child), end -> mean
    root: str
    metadata: tuple[tuple[str, str], ...] = ()

    def node_ids(self) -> set[str]:
        return {n.id for n in self.nodes}

    def node(self, node_id: str) -> TreeNode:
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise KeyError(node_id)

    def labels(self) -> dict[str, str]:
        return {n.id: n.label for n in self.nodes}


def _validate_arc_structure(m: CognitiveMap) -> list[Violation]:
    out: list[Violation] = []
    ids = [n.id for n in m.nodes]
    seen: set[str] = set()
    for n in m.nodes:
        if not n.id:
            out.append(Violation("empty-id", "node with empty id"))
        if not n.label:
            out.append(Violation("empty-label", f"node {n.id!r} has empty label", (n.id,)))
        if n.id in seen:
            out.append(Violation("duplicate-id", f"duplicate node id {n.id!r}", (n.id,)))
        seen.add(n.id)
    idset = set(ids)
    pair_signs: dict[tuple[str, str], set[Sign]] = {}
    for a in sorted(m.arcs, key=lambda a: (a.src, a.dst, a.sign.value)):
        if a.src == a.dst:
            out.append(Violation("irreflexive", f"self influence on {a.src!r}", (a.src,)))
        if a.src not in idset or a.dst not in idset:
            out.append(
                Violation("dangling-arc", f"arc ({a.src!r}, {a.dst!r}) references unknown node", (a.src, a.dst))
            )
            continue
        pair_signs.setdefault((a.src, a.dst), set()).add(a.sign)
    for (src, dst), signs in sorted(pair_signs.items()):
        if len(signs) > 1:
            out.append(
                Violation("dual-signed-pair", f"pair ({src!r}, {dst!r}) carries both signs", (src, dst))
            )
    if not m.nodes:
        out.append(Violation("empty-graph", "map has no nodes"))
    elif not out:
        pairs = m.arc_pairs()
        if not graphops.is_weakly_connected(idset, pairs):
            out.append(Violation("not-weakly-connected", "underlying undirected graph is not connected"))
    return out


def validate_cognitive_map(m: CognitiveMap) -> list[Violation]:
    """Empty report iff all cognitive-map invariants hold."""
    return _validate_arc_structure(m)


def validate_vcm(m: ValueCognitiveMap) -> list[Violation]:
    """Empty report iff all value-cognitive-map invariants hold, including
    fundamental-value uniqueness and reachability."""
    out = _validate_arc_structure(m)
    if out:
        return out
    ids = m.node_ids()
    if m.fundamental not in ids:
        out.append(Violation("fundamental-missing", f"fundamental {m.fundamental!r} not in node set", (m.fundamental,)))
        return out
    pairs = m.arc_pairs()
    outgoing = {s for s, _ in pairs}
    if m.fundamental in outgoing:
        out.append(
            Violation("fundamental-outgoing", f"fundamental {m.fundamental!r} has outgoing arcs", (m.fundamental,))
        )
    sinks = graphops.find_sinks(ids, pairs)
    if sinks != {m.fundamental}:
        out.append(
            Violation(
                "multiple-sinks",
                "fundamental is not the unique sink; sinks: " + ", ".join(sorted(sinks)),
                tuple(sorted(sinks)),
            )
        )
    for x in sorted(ids):
        if x == m.fundamental:
            continue
        if graphops.shortest_path_length(ids, pairs, x, m.fundamental) is None:
            out.append(
                Violation("unreachable-fundamental", f"no directed path from {x!r} to the fundamental value", (x,))
            )
    return out


def validate_emm(m: EndsMeansMap) -> list[Violation]:
    """Empty report iff the ends-means-map invariants hold (irreflexive,
    acyclic, weakly connected, unique source = fundamental)."""
    out: list[Violation] = []
    ids = m.node_ids()
    for end, mean in sorted(m.arcs):
        if end == mean:
            out.append(Violation("irreflexive", f"self arc on {end!r}", (end,)))
        if end not in ids or mean not in ids:
            out.append(Violation("dangling-arc", f"arc ({end!r}, {mean!r}) references unknown node", (end, mean)))
    if out:
        return out
    if m.fundamental not in ids:
        out.append(Violation("fundamental-missing", f"fundamental {m.fundamental!r} not in node set"))
        return out
    if not ids:
        out.append(Violation("empty-graph", "map has no nodes"))
        return out
    if graphops.enumerate_cycles(ids, m.arcs):
        out.append(Violation("cyclic", "ends-means relation contains a directed cycle"))
    if not graphops.is_weakly_connected(ids, m.arcs):
        out.append(Violation("not-weakly-connected", "underlying undirected graph is not connected"))
    sources = {i for i in ids if not any(mean == i for _, mean in m.arcs)}
    if sources != {m.fundamental}:
        out.append(
            Violation(
                "fundamental-not-unique-source",
                "nodes with zero incoming arcs: " + ", ".join(sorted(sources)),
                tuple(sorted(sources)),
            )
        )
    return out


def validate_tree(t: ValueTree) -> list[Violation]:
    """Empty report iff the value tree is an arborescence rooted at ``root``."""
    out: list[Violation] = []
    ids = t.node_ids()
    if t.root not in ids:
        return [Violation("root-missing", f"root {t.root!r} not in node set")]
    indeg = {i: 0 for i in ids}
    for parent, child in sorted(t.arcs):
        if parent not in ids or child not in ids:
            out.append(Violation("dangling-arc", f"arc ({parent!r}, {child!r}) references unknown node", (parent, child)))
            continue
        indeg[child] += 1
    if out:
        return out
    if indeg[t.root] != 0:
        out.append(Violation("root-incoming", "root has incoming arcs", (t.root,)))
    for i in sorted(ids):
        if i != t.root and indeg[i] != 1:
            out.append(Violation("in-degree", f"non-root node {i!r} has in-degree {indeg[i]}", (i,)))
    if graphops.enumerate_cycles(ids, t.arcs):
        out.append(Violation("cyclic", "tree contains a directed cycle"))
    for i in sorted(ids):
        if graphops.shortest_path_length(ids, t.arcs, t.root, i) is None:
            out.append(Violation("unreachable", f"node {i!r} not reachable from root", (i,)))
    return out
