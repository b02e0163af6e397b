"""Bit-exact serialization: map documents, value mappings, decision
scripts, transcripts, and DOT export.

JSON is the interchange encoding. Emission is canonical (sorted keys,
sorted nodes/arcs, fixed formatting) so structurally equal documents are
byte-identical, and parse(emit(d)) is a structural fixpoint.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from .decisions import Answer, DecisionTranscript
from .mapping import AUTO_VALUING, VERBATIM, MappingEntry, ValueMapping
from .model import (
    CognitiveMap,
    EmmNode,
    EndsMeansMap,
    InfluenceArc,
    Node,
    Provenance,
    Sign,
    TreeNode,
    ValueCognitiveMap,
    ValueTree,
)

SCHEMA_VERSION = 1

KIND_CM = "cognitive_map"
KIND_VCM = "value_cognitive_map"
KIND_EMM = "ends_means_map"
KIND_VT = "value_tree"

_KINDS = (KIND_CM, KIND_VCM, KIND_EMM, KIND_VT)


class ParseError(ValueError):
    pass


@dataclass
class MapDocument:
    """Parsed interchange form of any of the four map kinds."""

    kind: str
    nodes: list[dict]
    arcs: list[dict]
    fundamental: str | None = None
    metadata: dict[str, Any] = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION


def _req(obj: dict, key: str, typ, where: str):
    if key not in obj:
        raise ParseError(f"missing field {key!r} in {where}")
    v = obj[key]
    if not isinstance(v, typ):
        raise ParseError(f"field {key!r} in {where} has wrong type")
    return v


def _no_extra(obj: dict, allowed: set[str], where: str) -> None:
    extra = sorted(set(obj) - allowed)
    if extra:
        raise ParseError(f"unknown fields in {where}: {extra}")


def parse_map(text: str) -> MapDocument:
    """Strict parse of a map document; unknown fields rejected."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"malformed JSON at line {e.lineno} column {e.colno}: {e.msg}") from e
    if not isinstance(raw, dict):
        raise ParseError("document must be a JSON object")
    _no_extra(raw, {"kind", "schema_version", "nodes", "arcs", "fundamental", "metadata"}, "document")
    kind = _req(raw, "kind", str, "document")
    if kind not in _KINDS:
        raise ParseError(f"unknown kind {kind!r}")
    version = _req(raw, "schema_version", int, "document")
    if version > SCHEMA_VERSION:
        raise ParseError(f"unsupported schema_version {version}")
    nodes = _req(raw, "nodes", list, "document")
    arcs = _req(raw, "arcs", list, "document")
    metadata = raw.get("metadata", {})
    if not isinstance(metadata, dict):
        raise ParseError("metadata must be an object")

    node_allowed = {"id", "label"}
    if kind in (KIND_CM, KIND_VCM):
        node_allowed |= {"negated_label"}
    if kind == KIND_EMM:
        node_allowed |= {"base", "valence"}
    if kind == KIND_VT:
        node_allowed |= {"provenance"}
    ids = set()
    for i, n in enumerate(nodes):
        if not isinstance(n, dict):
            raise ParseError(f"node #{i} must be an object")
        where = f"node #{i}"
        _no_extra(n, node_allowed, where)
        nid = _req(n, "id", str, where)
        _req(n, "label", str, where)
        if nid in ids:
            raise ParseError(f"duplicate node id {nid!r}")
        ids.add(nid)
        if kind == KIND_EMM:
            if _req(n, "valence", str, where) not in ("affirmed", "negated"):
                raise ParseError(f"bad valence in {where}")
            _req(n, "base", str, where)
        if kind == KIND_VT:
            prov = _req(n, "provenance", dict, where)
            _no_extra(prov, {"kind", "sources", "context", "client_label"}, f"{where} provenance")
            pk = _req(prov, "kind", str, f"{where} provenance")
            if pk not in ("original", "merged", "split"):
                raise ParseError(f"bad provenance kind in {where}")
            _req(prov, "sources", list, f"{where} provenance")

    signed = kind in (KIND_CM, KIND_VCM)
    for i, a in enumerate(arcs):
        if not isinstance(a, dict):
            raise ParseError(f"arc #{i} must be an object")
        where = f"arc #{i}"
        allowed = {"from", "to"} | ({"sign"} if signed else set())
        _no_extra(a, allowed, where)
        src = _req(a, "from", str, where)
        dst = _req(a, "to", str, where)
        if signed and _req(a, "sign", str, where) not in ("+", "-"):
            raise ParseError(f"bad sign in {where}")
        dangling = [x for x in (src, dst) if x not in ids]
        if dangling:
            raise ParseError(f"dangling endpoint in {where}: {dangling}")

    fundamental = raw.get("fundamental")
    if kind == KIND_CM:
        if fundamental is not None:
            raise ParseError("cognitive_map documents carry no fundamental field")
    else:
        if not isinstance(fundamental, str):
            raise ParseError(f"{kind} documents require a fundamental node id")
        if fundamental not in ids:
            raise ParseError(f"fundamental {fundamental!r} not among node ids")

    return MapDocument(kind, nodes, arcs, fundamental, metadata, version)


def _canonical(doc: MapDocument) -> dict:
    out: dict[str, Any] = {
        "kind": doc.kind,
        "schema_version": doc.schema_version,
        "nodes": sorted(doc.nodes, key=lambda n: n["id"]),
        "arcs": sorted(doc.arcs, key=lambda a: (a["from"], a["to"], a.get("sign", ""))),
        "metadata": doc.metadata,
    }
    if doc.kind != KIND_CM:
        out["fundamental"] = doc.fundamental
    return out


def emit_map(doc: MapDocument) -> str:
    """Canonical text form; structurally equal documents emit identically."""
    return json.dumps(_canonical(doc), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# --- document <-> model conversions ---------------------------------------

def _sign(s: str) -> Sign:
    return Sign.POSITIVE if s == "+" else Sign.NEGATIVE


def to_cognitive_map(doc: MapDocument) -> CognitiveMap:
    if doc.kind != KIND_CM:
        raise ParseError(f"expected a cognitive_map document, got {doc.kind}")
    return CognitiveMap(
        nodes=tuple(
            Node(n["id"], n["label"], n.get("negated_label"))
            for n in sorted(doc.nodes, key=lambda n: n["id"])
        ),
        arcs=frozenset(InfluenceArc(a["from"], a["to"], _sign(a["sign"])) for a in doc.arcs),
        metadata=tuple(sorted((k, str(v)) for k, v in doc.metadata.items())),
    )


def to_vcm(doc: MapDocument) -> ValueCognitiveMap:
    if doc.kind != KIND_VCM:
        raise ParseError(f"expected a value_cognitive_map document, got {doc.kind}")
    return ValueCognitiveMap(
        nodes=tuple(
            Node(n["id"], n["label"], n.get("negated_label"))
            for n in sorted(doc.nodes, key=lambda n: n["id"])
        ),
        arcs=frozenset(InfluenceArc(a["from"], a["to"], _sign(a["sign"])) for a in doc.arcs),
        metadata=tuple(sorted((k, str(v)) for k, v in doc.metadata.items())),
        fundamental=doc.fundamental or "",
    )


def to_emm(doc: MapDocument) -> EndsMeansMap:
    if doc.kind != KIND_EMM:
        raise ParseError(f"expected an ends_means_map document, got {doc.kind}")
    nodes = tuple(
        EmmNode(n["id"], n["base"], n["valence"] == "negated", n["label"])
        for n in sorted(doc.nodes, key=lambda n: n["id"])
    )
    bases: dict[str, set[bool]] = {}
    for n in nodes:
        bases.setdefault(n.base, set()).add(n.negated)
    return EndsMeansMap(
        nodes=nodes,
        arcs=frozenset((a["from"], a["to"]) for a in doc.arcs),
        fundamental=doc.fundamental or "",
        dual_valence_bases=frozenset(b for b, v in bases.items() if len(v) == 2),
        metadata=tuple(sorted((k, str(v)) for k, v in doc.metadata.items())),
    )


def to_tree(doc: MapDocument) -> ValueTree:
    if doc.kind != KIND_VT:
        raise ParseError(f"expected a value_tree document, got {doc.kind}")
    nodes = []
    for n in sorted(doc.nodes, key=lambda n: n["id"]):
        p = n["provenance"]
        nodes.append(
            TreeNode(
                n["id"],
                n["label"],
                Provenance(p["kind"], tuple(p["sources"]), p.get("context"), p.get("client_label")),
            )
        )
    return ValueTree(
        nodes=tuple(nodes),
        arcs=frozenset((a["from"], a["to"]) for a in doc.arcs),
        root=doc.fundamental or "",
        metadata=tuple(sorted((k, str(v)) for k, v in doc.metadata.items())),
    )


def from_cognitive_map(m: CognitiveMap) -> MapDocument:
    nodes = []
    for n in sorted(m.nodes, key=lambda n: n.id):
        d = {"id": n.id, "label": n.label}
        if n.negated_label is not None:
            d["negated_label"] = n.negated_label
        nodes.append(d)
    arcs = [
        {"from": a.src, "to": a.dst, "sign": a.sign.value}
        for a in sorted(m.arcs, key=lambda a: (a.src, a.dst, a.sign.value))
    ]
    kind = KIND_VCM if isinstance(m, ValueCognitiveMap) else KIND_CM
    fundamental = m.fundamental if isinstance(m, ValueCognitiveMap) else None
    return MapDocument(kind, nodes, arcs, fundamental, dict(m.metadata))


def from_emm(m: EndsMeansMap) -> MapDocument:
    nodes = [
        {"id": n.id, "label": n.label, "base": n.base, "valence": "negated" if n.negated else "affirmed"}
        for n in sorted(m.nodes, key=lambda n: n.id)
    ]
    arcs = [{"from": e, "to": mn} for e, mn in sorted(m.arcs)]
    return MapDocument(KIND_EMM, nodes, arcs, m.fundamental, dict(m.metadata))


def from_tree(t: ValueTree) -> MapDocument:
    nodes = []
    for n in sorted(t.nodes, key=lambda n: n.id):
        prov: dict[str, Any] = {"kind": n.provenance.kind, "sources": sorted(n.provenance.sources)}
        if n.provenance.context is not None:
            prov["context"] = n.provenance.context
        if n.provenance.client_label is not None:
            prov["client_label"] = n.provenance.client_label
        nodes.append({"id": n.id, "label": n.label, "provenance": prov})
    arcs = [{"from": p, "to": c} for p, c in sorted(t.arcs)]
    return MapDocument(KIND_VT, nodes, arcs, t.root, dict(t.metadata))


# --- value mappings --------------------------------------------------------

def parse_value_mapping(text: str) -> ValueMapping:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"malformed JSON at line {e.lineno} column {e.colno}: {e.msg}") from e
    if not isinstance(raw, dict):
        raise ParseError("mapping must be a JSON object")
    _no_extra(raw, {"entries"}, "mapping")
    entries = _req(raw, "entries", dict, "mapping")
    out = []
    for cid in sorted(entries):
        e = entries[cid]
        if e is None:
            out.append((cid, MappingEntry(None)))
            continue
        if not isinstance(e, dict):
            raise ParseError(f"entry {cid!r} must be an object or null")
        _no_extra(e, {"value", "policy", "negated_label"}, f"entry {cid!r}")
        value = _req(e, "value", str, f"entry {cid!r}")
        policy = e.get("policy", AUTO_VALUING)
        if policy not in (AUTO_VALUING, VERBATIM):
            raise ParseError(f"bad policy in entry {cid!r}")
        out.append((cid, MappingEntry(value, policy, e.get("negated_label"))))
    return ValueMapping(tuple(out))


def emit_value_mapping(m: ValueMapping) -> str:
    entries: dict[str, Any] = {}
    for cid, e in sorted(m.entries):
        if e.value is None:
            entries[cid] = None
        else:
            d: dict[str, Any] = {"value": e.value, "policy": e.policy}
            if e.negated_label is not None:
                d["negated_label"] = e.negated_label
            entries[cid] = d
    return json.dumps({"entries": entries}, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# --- decision scripts and transcripts --------------------------------------

def parse_decision_script(text: str) -> dict[str, str]:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"malformed JSON at line {e.lineno} column {e.colno}: {e.msg}") from e
    if not isinstance(raw, dict):
        raise ParseError("decision script must be a JSON object")
    _no_extra(raw, {"answers"}, "decision script")
    answers = _req(raw, "answers", dict, "decision script")
    for k, v in answers.items():
        if not isinstance(v, str):
            raise ParseError(f"answer for {k!r} must be a string")
    return dict(answers)


def emit_decision_script(answers: dict[str, str]) -> str:
    return json.dumps({"answers": answers}, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def parse_transcript(text: str) -> DecisionTranscript:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"malformed JSON at line {e.lineno} column {e.colno}: {e.msg}") from e
    if not isinstance(raw, dict):
        raise ParseError("transcript must be a JSON object")
    _no_extra(raw, {"entries"}, "transcript")
    entries = _req(raw, "entries", list, "transcript")
    t = DecisionTranscript()
    for i, e in enumerate(entries):
        where = f"transcript entry #{i}"
        if not isinstance(e, dict):
            raise ParseError(f"{where} must be an object")
        _no_extra(e, {"id", "kind", "answer", "source"}, where)
        t.record(
            Answer(
                _req(e, "id", str, where),
                _req(e, "kind", str, where),
                _req(e, "answer", str, where),
                _req(e, "source", str, where),
            )
        )
    return t


def emit_transcript(t: DecisionTranscript) -> str:
    entries = [
        {"id": e.request_id, "kind": e.kind, "answer": e.answer, "source": e.source}
        for e in t.entries
    ]
    return json.dumps({"entries": entries}, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# --- DOT export -------------------------------------------------------------

def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(doc: MapDocument, rankdir: str = "BT") -> str:
    """Deterministic DOT text for any map kind.

    Negative influence arcs are dashed and labelled; negated literals and
    merged/split provenance get distinct node shapes; the fundamental value
    is drawn double-circled.
    """
    lines = ["digraph map {", f"  rankdir={rankdir};", "  node [shape=box];"]
    for n in sorted(doc.nodes, key=lambda n: n["id"]):
        attrs = [f"label={_dot_quote(n['label'])}"]
        if doc.fundamental is not None and n["id"] == doc.fundamental:
            attrs.append("peripheries=2")
        if n.get("valence") == "negated":
            attrs.append("style=dashed")
        prov = n.get("provenance", {})
        if prov.get("kind") == "merged":
            attrs.append("shape=octagon")
        elif prov.get("kind") == "split":
            attrs.append("shape=component")
        lines.append(f"  {_dot_quote(n['id'])} [{', '.join(attrs)}];")
    for a in sorted(doc.arcs, key=lambda a: (a["from"], a["to"], a.get("sign", ""))):
        attrs = []
        if a.get("sign") == "-":
            attrs = ['style=dashed, label="-"']
        elif a.get("sign") == "+":
            attrs = ['label="+"']
        suffix = f" [{attrs[0]}]" if attrs else ""
        lines.append(f"  {_dot_quote(a['from'])} -> {_dot_quote(a['to'])}{suffix};")
    lines.append("}")
    return "\n".join(lines) + "\n"
