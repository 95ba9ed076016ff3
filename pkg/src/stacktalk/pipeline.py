"""Per-round orchestration: decide action, maintain the stack, enrich the
current topic, and generate the response; owns session state and completion.

A turn is atomic: any propagated failure leaves the session exactly as it was
before the call.
"""

from __future__ import annotations

import copy
import logging
import uuid
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional

from .errors import (
    EmptyResponse,
    GatewayFailure,
    InvalidTask,
    SessionComplete,
    TransportError,
)
from .gateway import Backend, CompletionRequest, PromptPack, complete
from .manager import ActionCatalog, ActionDecision, decide_action
from .model import (
    ActionKind,
    Category,
    ChatMessage,
    Completion,
    Origin,
    Speaker,
    TaskDefinition,
    Topic,
    validate_task,
)
from .stack import DEFAULT_EVICTION_WINDOW, StackDelta, TopicStack

logger = logging.getLogger(__name__)

DEFAULT_CONTEXT_WINDOW = 10
FINAL_REPORT_TITLE = "final report"


class Directive(str, Enum):
    ASK_USER = "ask_user"
    ANSWER_USER = "answer_user"
    OPEN_CHAT = "open_chat"


@dataclass
class ContextDigest:
    """Recent turns verbatim plus an optional summary of everything older."""

    recent_turns: list[ChatMessage]
    older_summary: Optional[str]
    total_rounds: int
    summary_degraded: bool = False

    def render(self) -> str:
        parts = []
        if self.older_summary:
            parts.append(f"Summary of earlier conversation: {self.older_summary}")
        if self.recent_turns:
            parts.extend(
                f"[r{m.round}] {m.speaker.value}: {m.text}" for m in self.recent_turns
            )
        return "\n".join(parts) if parts else "(no messages yet)"


@dataclass
class EnrichedTopic:
    directive: Directive
    instruction: str
    source_topic_id: Optional[int] = None
    llm_degraded: bool = False

    def to_dict(self) -> dict[str, Any]:
        return {
            "directive": self.directive.value,
            "instruction": self.instruction,
            "source_topic_id": self.source_topic_id,
            "llm_degraded": self.llm_degraded,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "EnrichedTopic":
        return cls(
            directive=Directive(d["directive"]),
            instruction=d["instruction"],
            source_topic_id=d.get("source_topic_id"),
            llm_degraded=d.get("llm_degraded", False),
        )


@dataclass
class SessionState:
    session_id: str
    task: TaskDefinition
    stack: TopicStack
    history: list[ChatMessage] = field(default_factory=list)
    round: int = 1
    completion: Completion = Completion.IN_PROGRESS

    def to_dict(self) -> dict[str, Any]:
        return {
            "session_id": self.session_id,
            "task": self.task.to_dict(),
            "stack": self.stack.to_dict(),
            "history": [m.to_dict() for m in self.history],
            "round": self.round,
            "completion": self.completion.value,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "SessionState":
        return cls(
            session_id=d["session_id"],
            task=TaskDefinition.from_dict(d["task"]),
            stack=TopicStack.from_dict(d["stack"]),
            history=[ChatMessage.from_dict(m) for m in d["history"]],
            round=d["round"],
            completion=Completion(d["completion"]),
        )


@dataclass
class TurnResult:
    """Everything one turn produced; replays to the post-turn session state."""

    response: str
    decision: ActionDecision
    delta: StackDelta
    evicted: list[int]
    enriched: EnrichedTopic
    completion: Completion
    round: int
    report_delta: Optional[StackDelta] = None  # synthetic final-report push, if any

    def to_dict(self) -> dict[str, Any]:
        return {
            "response": self.response,
            "decision": self.decision.to_dict(),
            "delta": self.delta.to_dict(),
            "evicted": list(self.evicted),
            "enriched": self.enriched.to_dict(),
            "completion": self.completion.value,
            "round": self.round,
            "report_delta": self.report_delta.to_dict() if self.report_delta else None,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "TurnResult":
        return cls(
            response=d["response"],
            decision=ActionDecision.from_dict(d["decision"]),
            delta=StackDelta.from_dict(d["delta"]),
            evicted=list(d["evicted"]),
            enriched=EnrichedTopic.from_dict(d["enriched"]),
            completion=Completion(d["completion"]),
            round=d["round"],
            report_delta=StackDelta.from_dict(d["report_delta"]) if d.get("report_delta") else None,
        )


@dataclass
class EngineConfig:
    eviction_window: int = DEFAULT_EVICTION_WINDOW
    context_window: int = DEFAULT_CONTEXT_WINDOW


def start_session(task: TaskDefinition, config: Optional[EngineConfig] = None) -> SessionState:
    """Fresh session with the checklist preloaded, item 1 on top."""
    report = validate_task(task, strict_checklist_size=False)
    if not report.ok:
        raise InvalidTask("; ".join(report.violations))
    stack = TopicStack()
    stack.load_checklist(task, round=1)
    return SessionState(
        session_id=uuid.uuid4().hex,
        task=task,
        stack=stack,
    )


def build_context(
    history: list[ChatMessage],
    backend: Backend,
    pack: PromptPack,
    window: int = DEFAULT_CONTEXT_WINDOW,
) -> ContextDigest:
    """Last `window` messages verbatim; older turns compressed to a summary."""
    if window < 1:
        raise ValueError("context window must be >= 1")
    total_rounds = sum(1 for m in history if m.speaker is Speaker.USER)
    recent = list(history[-window:])
    older = history[:-window] if len(history) > window else []
    if not older:
        return ContextDigest(recent_turns=recent, older_summary=None, total_rounds=total_rounds)

    older_text = "\n".join(f"{m.speaker.value}: {m.text}" for m in older)
    prompt = (
        "Summarize the following earlier portion of a consultation dialogue in "
        "a few sentences, keeping every fact the user stated:\n" + older_text
    )
    try:
        summary = complete(
            backend, CompletionRequest(prompt=prompt, role_tag="context")
        )
        return ContextDigest(recent_turns=recent, older_summary=summary, total_rounds=total_rounds)
    except TransportError:
        # Degraded mode: keep a raw truncation of the older turns.
        truncated = older_text[:500]
        return ContextDigest(
            recent_turns=recent,
            older_summary=truncated,
            total_rounds=total_rounds,
            summary_degraded=True,
        )


def _template_instruction(topic: Topic) -> str:
    if topic.category is Category.ASK_USER:
        return (
            f"Ask the user about: {topic.title}. Collect the information this "
            "checklist item needs before moving on."
        )
    return (
        f"Answer the user's question about: {topic.title}, using the "
        "conversation context."
    )


def enrich_topic(
    topic: Optional[Topic],
    digest: ContextDigest,
    backend: Backend,
    pack: PromptPack,
) -> EnrichedTopic:
    """Turn the bare top-of-stack topic into a concrete per-round directive."""
    if topic is None:
        return EnrichedTopic(
            directive=Directive.OPEN_CHAT,
            instruction="No pending topics. Chat helpfully with the user about their goal.",
        )

    directive = (
        Directive.ASK_USER if topic.category is Category.ASK_USER else Directive.ANSWER_USER
    )
    bindings = {
        "topic": topic.title,
        "directive": directive.value,
        "context": digest.render(),
    }
    try:
        instruction = complete(
            backend,
            CompletionRequest.from_template(pack.get("enricher"), bindings, role_tag="enricher"),
        )
    except TransportError:
        return EnrichedTopic(
            directive=directive,
            instruction=_template_instruction(topic),
            source_topic_id=topic.id,
            llm_degraded=True,
        )
    if not instruction.strip():
        instruction = _template_instruction(topic)
    return EnrichedTopic(
        directive=directive,
        instruction=instruction,
        source_topic_id=topic.id,
    )


def generate_response(
    enriched: EnrichedTopic,
    digest: ContextDigest,
    task: TaskDefinition,
    backend: Backend,
    pack: PromptPack,
) -> str:
    """One chat-agent call; retried once on an empty completion."""
    knowledge = "\n".join(f"- {k}" for k in task.knowledge) if task.knowledge else "(none)"
    bindings = {
        "system_role": task.system_role,
        "instruction": enriched.instruction,
        "knowledge": knowledge,
        "context": digest.render(),
    }
    request = CompletionRequest.from_template(pack.get("chat"), bindings, role_tag="chat")
    try:
        text = complete(backend, request)
        if not text.strip():
            text = complete(backend, request)
    except TransportError as exc:
        raise GatewayFailure(f"chat backend failed: {exc}") from exc
    if not text.strip():
        raise EmptyResponse("chat agent returned empty output twice")
    return text


class DialogueEngine:
    """Binds a backend, prompt pack, and tuning knobs into a turn executor."""

    def __init__(
        self,
        backend: Backend,
        pack: PromptPack,
        config: Optional[EngineConfig] = None,
    ) -> None:
        self.backend = backend
        self.pack = pack
        self.config = config or EngineConfig()
        self.catalog = ActionCatalog.from_pack(pack)

    def start_session(self, task: TaskDefinition) -> SessionState:
        return start_session(task, self.config)

    def take_turn(self, session: SessionState, user_message: str) -> TurnResult:
        """Run the four stages for one round; atomic on failure."""
        if session.completion is Completion.COMPLETE:
            raise SessionComplete(f"session {session.session_id} already complete")

        work = copy.deepcopy(session)
        round_no = work.round
        user_msg = ChatMessage(round=round_no, speaker=Speaker.USER, text=user_message)
        pre_history = list(work.history)

        # Stage 1: think topic development.
        decision = decide_action(
            query=user_message,
            stack=work.stack,
            history=pre_history,
            catalog=self.catalog,
            backend=self.backend,
            pack=self.pack,
        )

        # Stage 2: maintain the topic stack, then sweep stale topics.
        delta = work.stack.apply_action(decision.action, round_no, task=work.task)
        evicted = work.stack.sweep_evictions(round_no, self.config.eviction_window)
        delta.evicted.extend(evicted)
        report_delta = self._update_completion(work, round_no)

        # Stage 3: build context and enrich the current topic.
        work.history.append(user_msg)
        digest = build_context(
            work.history, self.backend, self.pack, self.config.context_window
        )
        enriched = enrich_topic(work.stack.current_topic(), digest, self.backend, self.pack)

        # Stage 4: generate the response.
        response = generate_response(enriched, digest, work.task, self.backend, self.pack)

        work.history.append(ChatMessage(round=round_no, speaker=Speaker.SYSTEM, text=response))
        work.round = round_no + 1

        result = TurnResult(
            response=response,
            decision=decision,
            delta=delta,
            evicted=evicted,
            enriched=enriched,
            completion=work.completion,
            round=round_no,
            report_delta=report_delta,
        )
        # Commit: only now does the caller's session object change.
        session.__dict__.update(work.__dict__)
        return result

    def _update_completion(self, work: SessionState, round_no: int) -> Optional[StackDelta]:
        """Advance the completion state machine after the stack action."""
        if work.completion is Completion.IN_PROGRESS:
            completed, total = work.stack.checklist_progress(work.task)
            if total and completed == total:
                work.completion = Completion.REPORT_PENDING
                report_topic = work.stack.push_topic(
                    title=FINAL_REPORT_TITLE,
                    origin=Origin.PREDEFINED,
                    round=round_no,
                    category=Category.ANSWER_USER,
                )
                report_delta = StackDelta(
                    action=decision_free_push_action(),
                    round=round_no,
                    pushed=[report_topic.id],
                    pushed_topics=[Topic.from_dict(report_topic.to_dict())],
                )
                return report_delta
        elif work.completion is Completion.REPORT_PENDING:
            if not any(t.title == FINAL_REPORT_TITLE for t in work.stack.entries):
                work.completion = Completion.COMPLETE
        return None


def decision_free_push_action():
    """Synthetic action marking the engine's own final-report push in deltas."""
    from .model import Action

    return Action(kind=ActionKind.CREATE_TOPIC, title=FINAL_REPORT_TITLE)


def completion_status(session: SessionState) -> tuple[Completion, tuple[int, int]]:
    return session.completion, session.stack.checklist_progress(session.task)
