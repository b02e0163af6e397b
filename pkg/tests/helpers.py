"""Shared test utilities: compact constructors, random map generators,
and an independent mini-oracle for DOT text."""

from __future__ import annotations

import random
import re

from cogmaps.model import (
    CognitiveMap,
    EmmNode,
    EndsMeansMap,
    InfluenceArc,
    Node,
    Sign,
    ValueCognitiveMap,
)

SIGNS = {"+": Sign.POSITIVE, "-": Sign.NEGATIVE}


def make_cm(arcs: list[tuple[str, str, str]], extra_nodes: tuple[str, ...] = ()) -> CognitiveMap:
    ids = sorted({a[0] for a in arcs} | {a[1] for a in arcs} | set(extra_nodes))
    return CognitiveMap(
        nodes=tuple(Node(i, f"label {i}") for i in ids),
        arcs=frozenset(InfluenceArc(s, d, SIGNS[sg]) for s, d, sg in arcs),
    )


def make_vcm(arcs: list[tuple[str, str, str]], fundamental: str) -> ValueCognitiveMap:
    ids = sorted({a[0] for a in arcs} | {a[1] for a in arcs} | {fundamental})
    return ValueCognitiveMap(
        nodes=tuple(Node(i, f"valuing {i}") for i in ids),
        arcs=frozenset(InfluenceArc(s, d, SIGNS[sg]) for s, d, sg in arcs),
        fundamental=fundamental,
    )


def random_vcm(rng: random.Random, max_nodes: int = 10, extra_arc_factor: float = 1.0) -> ValueCognitiveMap:
    """A uniformly messy but always-valid value cognitive map.

    Node x0 is the fundamental value; a spine arc x_i -> x_{i-1} guarantees
    that every node reaches it and the graph is weakly connected. Random
    extra arcs (never out of x0, never reflexive, one sign per ordered
    pair) add branching, negative influence, and directed cycles.
    """
    n = rng.randint(2, max_nodes)
    ids = [f"x{i}" for i in range(n)]
    arcs: dict[tuple[str, str], str] = {}
    for i in range(1, n):
        target = ids[rng.randint(0, i - 1)] if rng.random() < 0.4 else ids[i - 1]
        arcs[(ids[i], target)] = rng.choice("+-")
    for _ in range(int(n * extra_arc_factor)):
        s = ids[rng.randint(1, n - 1)]
        d = ids[rng.randint(0, n - 1)]
        if s == d or (s, d) in arcs:
            continue
        arcs[(s, d)] = rng.choice("+-")
    return make_vcm([(s, d, sg) for (s, d), sg in arcs.items()], "x0")


def random_emm(rng: random.Random, max_nodes: int = 12, extra_arc_factor: float = 1.2) -> EndsMeansMap:
    """A random valid ends-means map (acyclic, unique source, connected),
    usually containing several multiple-predecessor nodes."""
    n = rng.randint(3, max_nodes)
    ids = [f"v{i}" for i in range(n)]
    arcs: set[tuple[str, str]] = set()
    for i in range(1, n):
        arcs.add((ids[rng.randint(0, i - 1)], ids[i]))
    for _ in range(int(n * extra_arc_factor)):
        i = rng.randint(0, n - 2)
        j = rng.randint(i + 1, n - 1)
        arcs.add((ids[i], ids[j]))
    return EndsMeansMap(
        nodes=tuple(EmmNode(i, i, False, f"valuing {i}") for i in ids),
        arcs=frozenset(arcs),
        fundamental="v0",
    )


_DOT_HEAD = re.compile(r"^digraph \w+ \{$")
_DOT_NODE = re.compile(r'^  "((?:[^"\\]|\\.)*)" \[([^\]]*)\];$')
_DOT_EDGE = re.compile(r'^  "((?:[^"\\]|\\.)*)" -> "((?:[^"\\]|\\.)*)"(?: \[([^\]]*)\])?;$')
_DOT_ATTR = re.compile(r"^  \w+(?: \[[^\]]*\])?;?$|^  \w+=\w+;$")


def parse_dot(text: str) -> tuple[set[str], set[tuple[str, str]]]:
    """Minimal independent reader for the exported DOT dialect. Raises
    ValueError on anything outside the expected grammar; returns the
    declared node ids and edge pairs (with escapes undone)."""
    lines = text.split("\n")
    if lines[-1] != "" or lines[-2] != "}":
        raise ValueError("missing closing brace / trailing newline")
    if not _DOT_HEAD.match(lines[0]):
        raise ValueError(f"bad header: {lines[0]!r}")
    unesc = lambda s: s.replace('\\"', '"').replace("\\\\", "\\")
    nodes: set[str] = set()
    edges: set[tuple[str, str]] = set()
    for ln in lines[1:-2]:
        if m := _DOT_EDGE.match(ln):
            u, v = unesc(m.group(1)), unesc(m.group(2))
            if u not in nodes or v not in nodes:
                raise ValueError(f"edge references undeclared node: {ln!r}")
            edges.add((u, v))
        elif m := _DOT_NODE.match(ln):
            nodes.add(unesc(m.group(1)))
        elif _DOT_ATTR.match(ln):
            continue
        else:
            raise ValueError(f"unparseable line: {ln!r}")
    return nodes, edges
