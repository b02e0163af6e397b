"""HTTP session service: transformation runs as resumable sessions.

Sessions are directories of canonical JSON artifacts under a data root;
(inputs, transcript) always reproduce the artifacts byte-identically, so
the filesystem is the only store.
"""

from __future__ import annotations

import json
import threading
import uuid
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel

from . import emm as emm_mod
from . import formats, pipeline, tree as tree_mod
from .decisions import (
    Answer,
    DecisionRequest,
    DecisionTranscript,
    InvalidAnswer,
    PendingDecision,
    SuspendingProvider,
    check_answer,
)
from .mapping import apply_mapping
from .model import validate_cognitive_map, validate_emm, validate_vcm
from .tree import compare_trees

STAGE_ORDER = [
    pipeline.STAGE_INGESTED,
    pipeline.STAGE_VCM_DONE,
    pipeline.STAGE_EMM_DONE,
    pipeline.STAGE_VT_DONE,
]


class CreateSession(BaseModel):
    document: dict
    mapping: dict | None = None
    options: dict = {}


class SubmitAnswer(BaseModel):
    request_id: str
    answer: str


class CompareBody(BaseModel):
    tree_a: dict
    tree_b: dict
    threshold: float = 0.25


def _req_json(r: DecisionRequest) -> dict:
    return {
        "id": r.id,
        "kind": r.kind,
        "prompt": r.prompt,
        "options": list(r.options),
        "context": [list(c) for c in r.context],
    }


def _req_from_json(d: dict) -> DecisionRequest:
    return DecisionRequest(
        d["id"], d["kind"], d["prompt"], tuple(d["options"]), tuple(tuple(c) for c in d["context"])
    )


class SessionStore:
    def __init__(self, root: Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def lock(self, sid: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(sid, threading.Lock())

    def dir(self, sid: str) -> Path:
        d = self.root / sid
        if not d.is_dir():
            raise HTTPException(404, f"no session {sid}")
        return d

    def read_state(self, sid: str) -> dict:
        return json.loads((self.dir(sid) / "state.json").read_text(encoding="utf-8"))

    def write_state(self, sid: str, state: dict) -> None:
        (self.root / sid / "state.json").write_text(
            json.dumps(state, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )

    def read_transcript(self, sid: str):
        return formats.parse_transcript((self.dir(sid) / "run.transcript.json").read_text(encoding="utf-8"))

    def write_transcript(self, sid: str, transcript) -> None:
        (self.root / sid / "run.transcript.json").write_text(
            formats.emit_transcript(transcript), encoding="utf-8"
        )

    def read_artifact(self, sid: str, stage: str) -> formats.MapDocument | None:
        p = self.dir(sid) / f"{stage}.map.json"
        if not p.exists():
            return None
        return formats.parse_map(p.read_text(encoding="utf-8"))

    def write_artifact(self, sid: str, stage: str, doc: formats.MapDocument) -> None:
        (self.root / sid / f"{stage}.map.json").write_text(formats.emit_map(doc), encoding="utf-8")


def _validate_input(doc: formats.MapDocument) -> list[str]:
    if doc.kind == formats.KIND_CM:
        return [str(v) for v in validate_cognitive_map(formats.to_cognitive_map(doc))]
    if doc.kind == formats.KIND_VCM:
        return [str(v) for v in validate_vcm(formats.to_vcm(doc))]
    if doc.kind == formats.KIND_EMM:
        return [str(v) for v in validate_emm(formats.to_emm(doc))]
    return [f"cannot start a session from a {doc.kind} document"]


def create_app(data_root: Path | str) -> FastAPI:
    store = SessionStore(Path(data_root))
    app = FastAPI(title="cogmaps session service")

    def session_view(sid: str) -> dict:
        state = store.read_state(sid)
        return {"id": sid, "stage": state["stage"], "pending": state.get("pending")}

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSession):
        try:
            doc = formats.parse_map(json.dumps(body.document))
        except formats.ParseError as e:
            raise HTTPException(422, str(e))
        report = _validate_input(doc)
        if report:
            raise HTTPException(422, {"violations": report})
        mapping_doc = None
        if body.mapping is not None:
            try:
                mapping_doc = formats.parse_value_mapping(json.dumps(body.mapping))
            except formats.ParseError as e:
                raise HTTPException(422, str(e))
        if doc.kind == formats.KIND_CM and mapping_doc is None:
            raise HTTPException(422, "a cognitive_map session requires a mapping")
        sid = uuid.uuid4().hex[:12]
        d = store.root / sid
        d.mkdir()
        (d / "input.map.json").write_text(formats.emit_map(doc), encoding="utf-8")
        if mapping_doc is not None:
            (d / "input.mapping.json").write_text(
                formats.emit_value_mapping(mapping_doc), encoding="utf-8"
            )
        store.write_transcript(sid, DecisionTranscript())
        store.write_state(sid, {"stage": pipeline.STAGE_INGESTED, "pending": None, "error": None})
        return session_view(sid)

    @app.get("/sessions/{sid}")
    def get_session(sid: str):
        return session_view(sid)

    def _advance_one(sid: str) -> None:
        state = store.read_state(sid)
        stage = state["stage"]
        input_doc = store.read_artifact(sid, "input")
        transcript = store.read_transcript(sid)
        provider = SuspendingProvider(transcript)

        if stage == pipeline.STAGE_INGESTED:
            if input_doc.kind == formats.KIND_CM:
                mapping = formats.parse_value_mapping(
                    (store.dir(sid) / "input.mapping.json").read_text(encoding="utf-8")
                )
                cm = formats.to_cognitive_map(input_doc)
                kept = {cid for cid, e in mapping.entries if e.value is not None} & cm.node_ids()
                pairs = {(a.src, a.dst) for a in cm.arcs if a.src in kept and a.dst in kept}
                fundamental = pipeline.infer_fundamental(kept, pairs)
                vcm = apply_mapping(cm, mapping, fundamental)
                store.write_artifact(sid, "vcm", formats.from_cognitive_map(vcm))
                state["stage"] = pipeline.STAGE_VCM_DONE
            elif input_doc.kind == formats.KIND_VCM:
                store.write_artifact(sid, "vcm", input_doc)
                state["stage"] = pipeline.STAGE_VCM_DONE
            else:  # EMM input skips straight to the tree stage
                store.write_artifact(sid, "emm", input_doc)
                state["stage"] = pipeline.STAGE_EMM_DONE
        elif stage in (pipeline.STAGE_VCM_DONE, pipeline.STAGE_EMM_PENDING):
            vcm = formats.to_vcm(store.read_artifact(sid, "vcm"))
            try:
                ends_means, trace = emm_mod.run_algorithm1(vcm, provider, transcript)
            except PendingDecision as p:
                state["stage"] = pipeline.STAGE_EMM_PENDING
                state["pending"] = _req_json(p.request)
            else:
                store.write_artifact(sid, "emm", formats.from_emm(ends_means))
                (store.dir(sid) / "emm_trace.json").write_text(
                    pipeline.emit_emm_trace(trace), encoding="utf-8"
                )
                state["stage"] = pipeline.STAGE_EMM_DONE
                state["pending"] = None
        elif stage in (pipeline.STAGE_EMM_DONE, pipeline.STAGE_VT_PENDING):
            ends_means = formats.to_emm(store.read_artifact(sid, "emm"))
            try:
                vt, _ = tree_mod.build_value_tree(ends_means, provider, transcript)
            except PendingDecision as p:
                state["stage"] = pipeline.STAGE_VT_PENDING
                state["pending"] = _req_json(p.request)
            else:
                store.write_artifact(sid, "tree", formats.from_tree(vt))
                state["stage"] = pipeline.STAGE_VT_DONE
                state["pending"] = None
        else:
            raise HTTPException(409, f"cannot advance a session in stage {stage}")

        store.write_transcript(sid, transcript)
        store.write_state(sid, state)

    @app.post("/sessions/{sid}/advance")
    def advance(sid: str):
        lock = store.lock(sid)
        if not lock.acquire(blocking=False):
            raise HTTPException(409, "session is busy")
        try:
            state = store.read_state(sid)
            if state.get("pending"):
                raise HTTPException(409, "a decision is pending; answer it first")
            if state["stage"] == pipeline.STAGE_VT_DONE:
                raise HTTPException(409, "session already complete")
            if state["stage"] == pipeline.STAGE_FAILED:
                raise HTTPException(409, "session failed")
            try:
                _advance_one(sid)
            except HTTPException:
                raise
            except Exception as e:
                state["stage"] = pipeline.STAGE_FAILED
                state["error"] = str(e)
                store.write_state(sid, state)
                raise HTTPException(500, str(e))
        finally:
            lock.release()
        return session_view(sid)

    @app.get("/sessions/{sid}/pending")
    def pending(sid: str):
        state = store.read_state(sid)
        return {"pending": state.get("pending")}

    @app.post("/sessions/{sid}/decisions")
    def submit_answer(sid: str, body: SubmitAnswer):
        lock = store.lock(sid)
        if not lock.acquire(blocking=False):
            raise HTTPException(409, "session is busy")
        try:
            state = store.read_state(sid)
            pend = state.get("pending")
            if not pend:
                raise HTTPException(409, "no decision is pending")
            if pend["id"] != body.request_id:
                raise HTTPException(409, f"pending decision is {pend['id']}, not {body.request_id}")
            req = _req_from_json(pend)
            try:
                check_answer(req, body.answer)
            except InvalidAnswer as e:
                raise HTTPException(422, str(e))
            transcript = store.read_transcript(sid)
            transcript.record(Answer(req.id, req.kind, body.answer, "service"))
            store.write_transcript(sid, transcript)
            state["pending"] = None
            store.write_state(sid, state)
        finally:
            lock.release()
        return {"recorded": body.request_id}

    @app.get("/sessions/{sid}/artifacts/{stage}")
    def get_artifact(sid: str, stage: str, format: str = "json"):
        if stage not in ("input", "vcm", "emm", "tree"):
            raise HTTPException(404, f"unknown stage {stage!r}")
        doc = store.read_artifact(sid, stage)
        if doc is None:
            raise HTTPException(409, f"stage {stage!r} not reached yet")
        if format == "dot":
            return PlainTextResponse(formats.export_dot(doc), media_type="text/vnd.graphviz")
        if format != "json":
            raise HTTPException(422, f"unknown format {format!r}")
        return PlainTextResponse(formats.emit_map(doc), media_type="application/json")

    @app.get("/sessions/{sid}/transcript")
    def get_transcript(sid: str):
        return PlainTextResponse(
            formats.emit_transcript(store.read_transcript(sid)), media_type="application/json"
        )

    @app.post("/compare")
    def compare(body: CompareBody):
        try:
            a = formats.to_tree(formats.parse_map(json.dumps(body.tree_a)))
            b = formats.to_tree(formats.parse_map(json.dumps(body.tree_b)))
        except formats.ParseError as e:
            raise HTTPException(422, str(e))
        pairs = compare_trees(a, b, body.threshold)
        return {
            "pairs": [
                {
                    "node_a": p.node_a,
                    "node_b": p.node_b,
                    "label_a": p.label_a,
                    "label_b": p.label_b,
                    "similarity": p.similarity,
                    "depth_a": p.depth_a,
                    "depth_b": p.depth_b,
                }
                for p in pairs
            ]
        }

    return app
