"""Concept-to-value translation: cognitive map -> value cognitive map.

Which concepts are translatable is analyst judgment, so the mapping is
always an explicit input artifact, never inferred. Arcs incident to
dropped concepts are removed, never contracted through them.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import graphops
from .model import CognitiveMap, Node, ValueCognitiveMap, validate_vcm

AUTO_VALUING = "auto_valuing"
VERBATIM = "verbatim"


@dataclass(frozen=True)
class MappingEntry:
    value: str | None  # None = concept dropped
    policy: str = AUTO_VALUING
    negated_label: str | None = None


@dataclass(frozen=True)
class ValueMapping:
    entries: tuple[tuple[str, MappingEntry], ...]

    def entry(self, concept_id: str) -> MappingEntry:
        for cid, e in self.entries:
            if cid == concept_id:
                return e
        raise KeyError(concept_id)


class MappingError(ValueError):
    pass


def value_label(entry: MappingEntry) -> str:
    assert entry.value is not None
    if entry.policy == AUTO_VALUING:
        return f"valuing {entry.value}"
    return entry.value


def apply_mapping(cm: CognitiveMap, mapping: ValueMapping, fundamental: str) -> ValueCognitiveMap:
    """Translate concepts to values, dropping untranslatable ones, and
    return a validated value cognitive map."""
    covered = {cid for cid, _ in mapping.entries}
    missing = sorted(cm.node_ids() - covered)
    if missing:
        raise MappingError(f"mapping has no entry for concepts: {missing}")

    kept: list[Node] = []
    for n in sorted(cm.nodes, key=lambda n: n.id):
        e = mapping.entry(n.id)
        if e.value is None:
            continue
        if not e.value:
            raise MappingError(f"empty value label for concept {n.id!r}")
        kept.append(Node(n.id, value_label(e), e.negated_label))
    kept_ids = {n.id for n in kept}

    if fundamental not in kept_ids:
        raise MappingError(f"fundamental concept {fundamental!r} was dropped by the mapping")

    arcs = frozenset(a for a in cm.arcs if a.src in kept_ids and a.dst in kept_ids)
    if kept_ids and not graphops.is_weakly_connected(kept_ids, {(a.src, a.dst) for a in arcs}):
        stranded = _components(kept_ids, arcs)
        raise MappingError(f"mapping disconnects map; components: {stranded}")

    vcm = ValueCognitiveMap(
        nodes=tuple(kept), arcs=arcs, metadata=cm.metadata, fundamental=fundamental
    )
    report = validate_vcm(vcm)
    if report:
        raise MappingError("mapped result is not a valid value cognitive map: " + "; ".join(map(str, report)))
    return vcm


def _components(ids: set[str], arcs) -> list[list[str]]:
    adj: dict[str, set[str]] = {i: set() for i in ids}
    for a in arcs:
        adj[a.src].add(a.dst)
        adj[a.dst].add(a.src)
    seen: set[str] = set()
    comps = []
    for start in sorted(ids):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            n = stack.pop()
            for m in adj[n]:
                if m not in comp:
                    comp.add(m)
                    stack.append(m)
        seen |= comp
        comps.append(sorted(comp))
    return comps
