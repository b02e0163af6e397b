"""Client-decision abstraction: requests, providers, transcripts, replay.

Every point where a transformation needs human input goes through a
DecisionProvider. Providers either answer or raise PendingDecision, which
suspends the run; re-running with the accumulated transcript resumes it.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

KIND_CYCLE = "cycle_arc_choice"
KIND_INDEPENDENCE = "independence_question"
KIND_MERGE_LABEL = "merge_label"

INDEPENDENT = "independent"
DEPENDENT = "dependent"


def request_id(stage: str, ordinal: int, subjects: tuple[str, ...]) -> str:
    """Deterministic token for a decision point: a pure function of the
    stage, a per-stage ordinal and the sorted subject node ids, so scripts
    survive serialization round-trips."""
    h = hashlib.sha256()
    h.update(stage.encode("utf-8"))
    h.update(b"\x00%d\x00" % ordinal)
    for s in sorted(subjects):
        h.update(s.encode("utf-8"))
        h.update(b"\x00")
    return h.hexdigest()[:16]


@dataclass(frozen=True)
class DecisionRequest:
    id: str
    kind: str
    prompt: str
    options: tuple[str, ...]  # empty for free-text merge_label
    context: tuple[tuple[str, str], ...] = ()  # subgraph snippet: (end, mean) arcs

    def __post_init__(self) -> None:
        if self.kind in (KIND_CYCLE, KIND_INDEPENDENCE) and not self.options:
            raise ValueError(f"{self.kind} request needs options")


@dataclass(frozen=True)
class Answer:
    request_id: str
    kind: str
    answer: str
    source: str  # script | interactive | service | auto


@dataclass
class DecisionTranscript:
    entries: list[Answer] = field(default_factory=list)

    def record(self, entry: Answer) -> None:
        if any(e.request_id == entry.request_id for e in self.entries):
            raise ValueError(f"duplicate decision id {entry.request_id}")
        self.entries.append(entry)


class PendingDecision(Exception):
    """Raised when a provider cannot answer; carries the open request."""

    def __init__(self, request: DecisionRequest):
        super().__init__(f"pending decision {request.id} ({request.kind})")
        self.request = request


class UnansweredDecision(Exception):
    def __init__(self, request: DecisionRequest):
        super().__init__(f"unanswered decision {request.id} ({request.kind})")
        self.request = request


class InvalidAnswer(Exception):
    pass


def check_answer(request: DecisionRequest, answer: str) -> None:
    if request.options and answer not in request.options:
        raise InvalidAnswer(
            f"answer {answer!r} for {request.id} not among options: {', '.join(request.options)}"
        )


class DecisionProvider:
    """Answers decision requests; raises PendingDecision to suspend."""

    source = "script"

    def answer(self, request: DecisionRequest) -> str:
        raise NotImplementedError


class AutoProvider(DecisionProvider):
    """Deterministic tie-break for choices the procedure allows to be made
    arbitrarily. Never answers independence questions; supplies generated
    merge labels only if ``label_fallback`` is set."""

    source = "auto"

    def __init__(self, label_fallback: bool = False):
        self.label_fallback = label_fallback

    def answer(self, request: DecisionRequest) -> str:
        if request.kind == KIND_CYCLE:
            return min(request.options)
        if request.kind == KIND_MERGE_LABEL and self.label_fallback:
            return ""  # empty answer -> generated fallback label
        raise PendingDecision(request)


class ScriptedProvider(DecisionProvider):
    """Answers from a request-id -> answer mapping. In strict mode a
    missing id is an error; in lenient mode it falls through to the auto
    provider (recorded with source=auto)."""

    source = "script"

    def __init__(self, answers: dict[str, str], strict: bool = True):
        self.answers = dict(answers)
        self.strict = strict
        self._auto = AutoProvider(label_fallback=True)

    def answer(self, request: DecisionRequest) -> str:
        if request.id in self.answers:
            a = self.answers[request.id]
            check_answer(request, a)
            return a
        if self.strict:
            raise UnansweredDecision(request)
        return self._auto.answer(request)

    def source_for(self, request: DecisionRequest) -> str:
        return "script" if request.id in self.answers else "auto"


class InteractiveProvider(DecisionProvider):
    """Blocks on terminal input; re-prompts until the answer is valid."""

    source = "interactive"

    def __init__(self, input_fn=input, print_fn=print):
        self._input = input_fn
        self._print = print_fn

    def answer(self, request: DecisionRequest) -> str:
        self._print(request.prompt)
        if request.context:
            for end, mean in request.context:
                self._print(f"    {end} --> {mean}")
        if request.options:
            for i, opt in enumerate(request.options, 1):
                self._print(f"  [{i}] {opt}")
        while True:
            raw = self._input("> ").strip()
            if not request.options:
                return raw
            if raw in request.options:
                return raw
            if raw.isdigit() and 1 <= int(raw) <= len(request.options):
                return request.options[int(raw) - 1]
            self._print("invalid answer, choose one of: " + ", ".join(request.options))


class SuspendingProvider(DecisionProvider):
    """Answers from a transcript prefix, then suspends. Used by the
    session service: resuming a run replays the transcript and parks the
    first unanswered request."""

    source = "service"

    def __init__(self, transcript: DecisionTranscript):
        self.answers = {e.request_id: e.answer for e in transcript.entries}

    def answer(self, request: DecisionRequest) -> str:
        if request.id in self.answers:
            return self.answers[request.id]
        raise PendingDecision(request)


def ask(
    provider: DecisionProvider, transcript: DecisionTranscript, request: DecisionRequest
) -> str:
    """Route a request through a provider, recording the answer.

    Answers already present in the transcript are reused verbatim, which
    is what makes suspended runs resumable.
    """
    for e in transcript.entries:
        if e.request_id == request.id:
            return e.answer
    a = provider.answer(request)
    if request.options:
        check_answer(request, a)
    source = provider.source
    if isinstance(provider, ScriptedProvider):
        source = provider.source_for(request)
    transcript.record(Answer(request.id, request.kind, a, source))
    return a


def replay(transcript: DecisionTranscript) -> ScriptedProvider:
    """A provider that re-answers a completed run exactly."""
    return ScriptedProvider({e.request_id: e.answer for e in transcript.entries}, strict=True)


def verify_replay(original: DecisionTranscript, rerun: DecisionTranscript) -> None:
    """Raise on the first divergent request id between two transcripts."""
    for a, b in zip(original.entries, rerun.entries):
        if a.request_id != b.request_id:
            raise RuntimeError(f"replay divergence at request {b.request_id} (expected {a.request_id})")
    if len(original.entries) != len(rerun.entries):
        raise RuntimeError("replay divergence: transcripts have different lengths")
