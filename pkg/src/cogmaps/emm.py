"""Value cognitive map -> ends-means map.

Label propagation from the fundamental value, the four sign/direction
transformation rules, discarding of unlabelled literals, and cycle
reduction with client consultation on ties.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import decisions, graphops
from .model import (
    EmmNode,
    EndsMeansMap,
    InfluenceArc,
    Sign,
    ValueCognitiveMap,
    ValueLiteral,
    literal_label,
    validate_vcm,
)

# the four (sign x end-valence) transformation rules
RULE_POS_AFFIRMED = "pos_affirmed"  # r+(x,y), y affirmed  => pi(y, x)
RULE_POS_NEGATED = "pos_negated"    # r+(x,y), y negated   => pi(~y, ~x)
RULE_NEG_AFFIRMED = "neg_affirmed"  # r-(x,y), y affirmed  => pi(y, ~x)
RULE_NEG_NEGATED = "neg_negated"    # r-(x,y), y negated   => pi(~y, x)

RESOLUTION_UNIQUE_LONGEST = "unique_longest"
RESOLUTION_CLIENT_CHOICE = "client_choice"
RESOLUTION_ARBITRARY = "arbitrary"


def transform_rule(arc: InfluenceArc, end_negated: bool) -> tuple[str, ValueLiteral, ValueLiteral]:
    """Map one influence arc to an ends-means arc, given the valence under
    which the arc's head is labelled. Returns (rule name, end, mean)."""
    x, y = arc.src, arc.dst
    if arc.sign is Sign.POSITIVE:
        if not end_negated:
            return RULE_POS_AFFIRMED, ValueLiteral(y), ValueLiteral(x)
        return RULE_POS_NEGATED, ValueLiteral(y, True), ValueLiteral(x, True)
    if not end_negated:
        return RULE_NEG_AFFIRMED, ValueLiteral(y), ValueLiteral(x, True)
    return RULE_NEG_NEGATED, ValueLiteral(y, True), ValueLiteral(x)


@dataclass(frozen=True)
class RuleEvent:
    rule: str
    consumed_arc: tuple[str, str, str]  # (src, dst, sign)
    emitted_arc: tuple[str, str]        # (end key, mean key)
    wave: int
    duplicate: bool = False


@dataclass(frozen=True)
class CycleEvent:
    cycle: tuple[str, ...]
    eliminated_arc: tuple[str, str]
    resolution: str
    tail_distances: tuple[tuple[str, int], ...]
    request_id: str | None = None


@dataclass
class EmmTrace:
    """Ordered record of every rule application and cycle resolution;
    replaying it against the same map reproduces the same result."""

    events: list = field(default_factory=list)

    def rule_events(self) -> list[RuleEvent]:
        return [e for e in self.events if isinstance(e, RuleEvent)]

    def cycle_events(self) -> list[CycleEvent]:
        return [e for e in self.events if isinstance(e, CycleEvent)]


class AlgorithmError(RuntimeError):
    pass


def resolve_cycle(
    cycle: tuple[str, ...],
    root: str,
    node_ids: set[str],
    arcs: set[tuple[str, str]],
    provider: decisions.DecisionProvider,
    transcript: decisions.DecisionTranscript,
    ordinal: int,
    labels: dict[str, str],
) -> CycleEvent:
    """Pick the arc of an elementary cycle to eliminate.

    For each arc the tail's shortest distance from the fundamental value is
    measured on the graph built so far; a strictly farthest tail marks the
    arc to drop without consultation. Ties go to the client, or to a
    deterministic arbitrary pick when the provider answers automatically.
    """
    dist = graphops.bfs_distances(node_ids, arcs, root)
    cycle_arcs = [(cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle))]
    tails = tuple((u, dist.get(u, -1)) for u, _ in cycle_arcs)
    far = max(d for _, d in tails)
    candidates = sorted((u, v) for (u, v), (_, d) in zip(cycle_arcs, tails) if d == far)
    if len(candidates) == 1:
        return CycleEvent(cycle, candidates[0], RESOLUTION_UNIQUE_LONGEST, tails)

    options = tuple(f"{u}->{v}" for u, v in candidates)
    rid = decisions.request_id("emm-cycle", ordinal, tuple(f"{u}|{v}" for u, v in candidates))
    shown = " -> ".join(labels.get(n, n) for n in cycle + (cycle[0],))
    req = decisions.DecisionRequest(
        id=rid,
        kind=decisions.KIND_CYCLE,
        prompt=(
            "The ends-means relation contains the cycle: "
            f"{shown}. Several arcs start equally far from the fundamental "
            "value; choose which arc to eliminate."
        ),
        options=options,
        context=tuple(cycle_arcs),
    )
    answer = decisions.ask(provider, transcript, req)
    chosen = candidates[options.index(answer)]
    source = next(e.source for e in transcript.entries if e.request_id == rid)
    resolution = RESOLUTION_ARBITRARY if source == "auto" else RESOLUTION_CLIENT_CHOICE
    return CycleEvent(cycle, chosen, resolution, tails, rid)


def run_algorithm1(
    vcm: ValueCognitiveMap,
    provider: decisions.DecisionProvider,
    transcript: decisions.DecisionTranscript | None = None,
    cycle_ceiling: int = graphops.DEFAULT_CYCLE_CEILING,
) -> tuple[EndsMeansMap, EmmTrace]:
    """Transform a valid value cognitive map into an ends-means map.

    Deterministic up to cycle resolution; decision points route through
    ``provider`` and are recorded in ``transcript``.
    """
    report = validate_vcm(vcm)
    if report:
        raise AlgorithmError("invalid value cognitive map: " + "; ".join(map(str, report)))
    if transcript is None:
        transcript = decisions.DecisionTranscript()
    trace = EmmTrace()

    nodes_by_id = {n.id: n for n in vcm.nodes}
    root = ValueLiteral(vcm.fundamental)
    labelled: set[str] = {root.key}
    pending: set[InfluenceArc] = set(vcm.arcs)
    emitted: set[tuple[str, str]] = set()
    incoming: dict[str, list[InfluenceArc]] = {}
    for a in vcm.arcs:
        incoming.setdefault(a.dst, []).append(a)
    for v in incoming.values():
        v.sort(key=lambda a: (a.src, a.sign.value))

    max_waves = len(vcm.nodes) + len(vcm.arcs)
    wave = 0
    while pending:
        wave += 1
        if wave > max_waves:
            raise AlgorithmError("label propagation failed to terminate")
        snapshot = set(labelled)
        progress = False
        for base in sorted(nodes_by_id):
            if base in snapshot:
                end_negated = False  # affirmed end takes precedence
            elif ValueLiteral(base, True).key in snapshot:
                end_negated = True
            else:
                continue
            for arc in list(incoming.get(base, ())):
                if arc not in pending:
                    continue
                rule, end, mean = transform_rule(arc, end_negated)
                pending.discard(arc)
                progress = True
                dup = (end.key, mean.key) in emitted
                if not dup:
                    emitted.add((end.key, mean.key))
                labelled.add(mean.key)
                trace.events.append(
                    RuleEvent(rule, (arc.src, arc.dst, arc.sign.value), (end.key, mean.key), wave, dup)
                )
        if not progress:
            raise AlgorithmError("pending influence arcs cannot be consumed (map invariant breach)")

    # unlabelled literals are discarded; every labelled one is incident to
    # an emitted arc (or is the fundamental value)
    def mk_node(key: str) -> EmmNode:
        negated = key.startswith("~")
        base = key[1:] if negated else key
        return EmmNode(key, base, negated, literal_label(nodes_by_id[base], negated))

    node_ids = set(labelled)
    arcs = set(emitted)

    ordinal = 0
    while True:
        cycles = graphops.enumerate_cycles(node_ids, arcs, ceiling=cycle_ceiling)
        if not cycles:
            break
        labels = {k: mk_node(k).label for k in node_ids}
        event = resolve_cycle(
            cycles[0], root.key, node_ids, arcs, provider, transcript, ordinal, labels
        )
        arcs.discard(event.eliminated_arc)
        trace.events.append(event)
        ordinal += 1

    bases_seen: dict[str, set[bool]] = {}
    for key in node_ids:
        n = mk_node(key)
        bases_seen.setdefault(n.base, set()).add(n.negated)
    dual = frozenset(b for b, v in bases_seen.items() if len(v) == 2)

    emm = EndsMeansMap(
        nodes=tuple(sorted((mk_node(k) for k in node_ids), key=lambda n: n.id)),
        arcs=frozenset(arcs),
        fundamental=root.key,
        dual_valence_bases=dual,
        metadata=vcm.metadata,
    )
    return emm, trace
