"""Stage orchestration shared by the CLI and the session service.

A run starts from whichever document kind is supplied and carries a
decision transcript; suspension at a client decision point is reported in
the result rather than raised, so callers can park and resume.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import emm as emm_mod
from . import formats, graphops, tree as tree_mod
from .decisions import (
    DecisionProvider,
    DecisionRequest,
    DecisionTranscript,
    PendingDecision,
    UnansweredDecision,
)
from .mapping import ValueMapping, apply_mapping
from .model import validate_vcm

STAGE_INGESTED = "ingested"
STAGE_VCM_DONE = "vcm_done"
STAGE_EMM_PENDING = "emm_pending_decision"
STAGE_EMM_DONE = "emm_done"
STAGE_VT_PENDING = "vt_pending_decision"
STAGE_VT_DONE = "vt_done"
STAGE_FAILED = "failed"


class PipelineError(RuntimeError):
    def __init__(self, stage: str, message: str):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage


@dataclass
class PipelineResult:
    stage: str
    transcript: DecisionTranscript
    vcm_doc: formats.MapDocument | None = None
    emm_doc: formats.MapDocument | None = None
    tree_doc: formats.MapDocument | None = None
    emm_trace: emm_mod.EmmTrace | None = None
    tree_trace: tree_mod.TreeTrace | None = None
    pending: DecisionRequest | None = None

    def artifacts(self) -> dict[str, formats.MapDocument]:
        out = {}
        if self.vcm_doc is not None:
            out["vcm"] = self.vcm_doc
        if self.emm_doc is not None:
            out["emm"] = self.emm_doc
        if self.tree_doc is not None:
            out["tree"] = self.tree_doc
        return out


def infer_fundamental(node_ids, arc_pairs) -> str:
    """The unique sink of the mapped value graph."""
    sinks = graphops.find_sinks(node_ids, arc_pairs)
    if len(sinks) != 1:
        raise PipelineError("vcm", f"cannot infer a unique fundamental value; sinks: {sorted(sinks)}")
    return next(iter(sinks))


def run_pipeline(
    doc: formats.MapDocument,
    provider: DecisionProvider,
    mapping: ValueMapping | None = None,
    transcript: DecisionTranscript | None = None,
) -> PipelineResult:
    """Run cm -> vcm -> emm -> value tree starting from whichever stage the
    input kind dictates. Suspension is reported via ``result.pending``."""
    if transcript is None:
        transcript = DecisionTranscript()
    result = PipelineResult(STAGE_INGESTED, transcript)

    if doc.kind == formats.KIND_CM:
        if mapping is None:
            raise PipelineError("vcm", "a value mapping is required to start from a cognitive map")
        cm = formats.to_cognitive_map(doc)
        kept = {cid for cid, e in mapping.entries if e.value is not None} & cm.node_ids()
        pairs = {(a.src, a.dst) for a in cm.arcs if a.src in kept and a.dst in kept}
        fundamental = infer_fundamental(kept, pairs)
        try:
            vcm = apply_mapping(cm, mapping, fundamental)
        except Exception as e:
            raise PipelineError("vcm", str(e)) from e
        result.vcm_doc = formats.from_cognitive_map(vcm)
    elif doc.kind == formats.KIND_VCM:
        vcm = formats.to_vcm(doc)
        report = validate_vcm(vcm)
        if report:
            raise PipelineError("vcm", "; ".join(map(str, report)))
        result.vcm_doc = doc
    elif doc.kind == formats.KIND_EMM:
        vcm = None
    else:
        raise PipelineError("ingest", f"cannot run the pipeline from a {doc.kind} document")
    result.stage = STAGE_VCM_DONE if vcm is not None else STAGE_INGESTED

    if doc.kind == formats.KIND_EMM:
        ends_means = formats.to_emm(doc)
        result.emm_doc = doc
        result.stage = STAGE_EMM_DONE
    else:
        try:
            ends_means, result.emm_trace = emm_mod.run_algorithm1(vcm, provider, transcript)
        except (PendingDecision, UnansweredDecision) as p:
            result.stage = STAGE_EMM_PENDING
            result.pending = p.request
            return result
        except Exception as e:
            raise PipelineError("emm", str(e)) from e
        result.emm_doc = formats.from_emm(ends_means)
        result.stage = STAGE_EMM_DONE

    try:
        vt, result.tree_trace = tree_mod.build_value_tree(ends_means, provider, transcript)
    except (PendingDecision, UnansweredDecision) as p:
        result.stage = STAGE_VT_PENDING
        result.pending = p.request
        return result
    except Exception as e:
        raise PipelineError("tree", str(e)) from e
    result.tree_doc = formats.from_tree(vt)
    result.stage = STAGE_VT_DONE
    return result


def emit_emm_trace(trace: emm_mod.EmmTrace) -> str:
    """Canonical JSON form of an algorithm trace (audit artifact)."""
    events = []
    for e in trace.events:
        if isinstance(e, emm_mod.RuleEvent):
            events.append(
                {
                    "event": "rule",
                    "rule": e.rule,
                    "consumed_arc": list(e.consumed_arc),
                    "emitted_arc": list(e.emitted_arc),
                    "wave": e.wave,
                    "duplicate": e.duplicate,
                }
            )
        else:
            events.append(
                {
                    "event": "cycle",
                    "cycle": list(e.cycle),
                    "eliminated_arc": list(e.eliminated_arc),
                    "resolution": e.resolution,
                    "tail_distances": [[n, d] for n, d in e.tail_distances],
                    "request_id": e.request_id,
                }
            )
    return json.dumps({"events": events}, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
