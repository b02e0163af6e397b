"""Pure graph algorithms shared by every pipeline stage.

All arcs have unit length, so every shortest-path question reduces to
breadth-first search. Functions take plain node-id / arc-pair collections
so they work on any of the map types.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Collection, Iterable
from itertools import islice

import networkx as nx

ArcPair = tuple[str, str]

DEFAULT_CYCLE_CEILING = 10_000


class EmptyGraphError(ValueError):
    pass


class UnknownNodeError(KeyError):
    pass


class CycleCeilingExceeded(RuntimeError):
    def __init__(self, ceiling: int):
        super().__init__(f"graph has more than {ceiling} elementary cycles")
        self.ceiling = ceiling


def _successors(arcs: Iterable[ArcPair]) -> dict[str, list[str]]:
    succ: dict[str, list[str]] = {}
    for src, dst in arcs:
        succ.setdefault(src, []).append(dst)
    for v in succ.values():
        v.sort()
    return succ


def is_weakly_connected(nodes: Collection[str], arcs: Iterable[ArcPair]) -> bool:
    """True iff undirected reachability spans all nodes."""
    nodes = set(nodes)
    if not nodes:
        raise EmptyGraphError("empty graph")
    adj: dict[str, set[str]] = {n: set() for n in nodes}
    for src, dst in arcs:
        adj[src].add(dst)
        adj[dst].add(src)
    seen = {next(iter(sorted(nodes)))}
    queue = deque(seen)
    while queue:
        n = queue.popleft()
        for m in adj[n]:
            if m not in seen:
                seen.add(m)
                queue.append(m)
    return seen == nodes


def bfs_distances(nodes: Collection[str], arcs: Iterable[ArcPair], source: str) -> dict[str, int]:
    """Directed shortest-path lengths (in arcs) from ``source`` to every
    reachable node."""
    nodes = set(nodes)
    if source not in nodes:
        raise UnknownNodeError(f"node {source!r} not in graph")
    succ = _successors((a for a in arcs if a[0] in nodes and a[1] in nodes))
    dist = {source: 0}
    queue = deque([source])
    while queue:
        n = queue.popleft()
        for m in succ.get(n, ()):
            if m not in dist:
                dist[m] = dist[n] + 1
                queue.append(m)
    return dist


def shortest_path_length(
    nodes: Collection[str], arcs: Iterable[ArcPair], src: str, dst: str
) -> int | None:
    """Minimal number of arcs on any directed path src -> dst; None when no
    directed path exists."""
    nodes = set(nodes)
    if src not in nodes:
        raise UnknownNodeError(f"node {src!r} not in graph")
    if dst not in nodes:
        raise UnknownNodeError(f"node {dst!r} not in graph")
    return bfs_distances(nodes, arcs, src).get(dst)


def find_sinks(nodes: Collection[str], arcs: Iterable[ArcPair]) -> set[str]:
    """All nodes with zero outgoing arcs."""
    out = set(nodes)
    for src, _ in arcs:
        out.discard(src)
    return out


def rank(vcm, node: str) -> int:
    """Shortest directed path length from ``node`` to the fundamental value;
    0 for the fundamental value itself."""
    ids = vcm.node_ids()
    if node not in ids:
        raise UnknownNodeError(f"node {node!r} not in map")
    d = shortest_path_length(ids, vcm.arc_pairs(), node, vcm.fundamental)
    if d is None:
        raise UnknownNodeError(f"node {node!r} has no directed path to the fundamental value")
    return d


def _canonical_cycle(cycle: list[str]) -> tuple[str, ...]:
    # rotate so the lexicographically smallest node comes first
    i = cycle.index(min(cycle))
    return tuple(cycle[i:] + cycle[:i])


def enumerate_cycles(
    nodes: Collection[str],
    arcs: Iterable[ArcPair],
    ceiling: int = DEFAULT_CYCLE_CEILING,
) -> list[tuple[str, ...]]:
    """Every elementary directed cycle, each exactly once up to rotation,
    in deterministic order (smallest node id, then length, then nodes).

    Raises CycleCeilingExceeded when the graph has more elementary cycles
    than ``ceiling``.
    """
    g = nx.DiGraph()
    g.add_nodes_from(nodes)
    g.add_edges_from(arcs)
    found = [_canonical_cycle(c) for c in islice(nx.simple_cycles(g), ceiling + 1)]
    if len(found) > ceiling:
        raise CycleCeilingExceeded(ceiling)
    return sorted(found, key=lambda c: (c[0], len(c), c))


def layer_assignment(emm) -> dict[str, int]:
    """Shortest directed distance from the fundamental value to each node
    of an ends-means map; errors on nodes it cannot reach."""
    ids = emm.node_ids()
    dist = bfs_distances(ids, emm.arcs, emm.fundamental)
    orphans = sorted(ids - dist.keys())
    if orphans:
        raise UnknownNodeError(f"orphan nodes not reachable from the fundamental value: {orphans}")
    return dist
