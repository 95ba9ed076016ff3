"""Evaluation harness: user simulator, episode runner, LLM judge, and the
RC/CR/SR/RQ/CS metric computation with position-swapped pairwise comparison.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional, Protocol

from .errors import EmptyInput, StacktalkError, VerdictParseError
from .gateway import Backend, CompletionRequest, PromptPack, complete
from .model import ChatMessage, Completion, Speaker, TaskDefinition
from .pipeline import DialogueEngine, SessionState

logger = logging.getLogger(__name__)

DONE_TOKEN = "[DONE]"
DEFAULT_MAX_ROUNDS = 20

JUDGE_CRITERIA = (
    "Understanding: how well the system grasped user requests",
    "Relevance: whether responses applied directly to the user's needs",
    "Complex handling: how well multifaceted queries were managed",
    "Efficiency: how quickly the conversation reached a resolution",
    "Experience: overall ease and satisfaction of the interaction",
    "Comprehensiveness: whether responses covered the user's question fully",
    "Detail: whether responses carried enough depth",
    "Sufficiency: whether all aspects and implications were explored",
)


class Termination(str, Enum):
    COMPLETION = "completion"
    MAX_ROUNDS = "max_rounds"
    ERROR = "error"


@dataclass
class Transcript:
    task_id: str
    system_label: str
    messages: list[ChatMessage] = field(default_factory=list)
    rounds: int = 0
    terminated_by: Termination = Termination.MAX_ROUNDS
    checklist_marks: Optional[dict[str, bool]] = None
    error: Optional[str] = None

    def render(self) -> str:
        return "\n".join(f"{m.speaker.value}: {m.text}" for m in self.messages)

    def to_dict(self) -> dict[str, Any]:
        return {
            "task_id": self.task_id,
            "system_label": self.system_label,
            "messages": [m.to_dict() for m in self.messages],
            "rounds": self.rounds,
            "terminated_by": self.terminated_by.value,
            "checklist_marks": self.checklist_marks,
            "error": self.error,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "Transcript":
        return cls(
            task_id=d["task_id"],
            system_label=d["system_label"],
            messages=[ChatMessage.from_dict(m) for m in d["messages"]],
            rounds=d["rounds"],
            terminated_by=Termination(d["terminated_by"]),
            checklist_marks=d.get("checklist_marks"),
            error=d.get("error"),
        )


@dataclass
class GradeVerdict:
    rq: float
    success: int
    per_item: dict[str, bool]
    clamped: bool = False

    def to_dict(self) -> dict[str, Any]:
        return {
            "rq": self.rq,
            "success": self.success,
            "per_item": self.per_item,
            "clamped": self.clamped,
        }


@dataclass
class ComparisonOutcome:
    task_id: str
    run1_winner: str  # "A" | "B" | "tie"
    run2_winner: str
    score_a: float
    score_b: float
    degraded_runs: int = 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "task_id": self.task_id,
            "run1_winner": self.run1_winner,
            "run2_winner": self.run2_winner,
            "score_a": self.score_a,
            "score_b": self.score_b,
            "degraded_runs": self.degraded_runs,
        }


@dataclass
class MetricsReport:
    rc: Optional[float]
    cr: Optional[float]
    sr: Optional[float]
    rq: Optional[float]
    cs_a: Optional[float]
    cs_b: Optional[float]
    n_tasks: int
    n_completed: int = 0
    n_max_rounds: int = 0
    n_errors: int = 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "RC": self.rc,
            "CR": self.cr,
            "SR": self.sr,
            "RQ": self.rq,
            "CS_A": self.cs_a,
            "CS_B": self.cs_b,
            "n_tasks": self.n_tasks,
            "n_completed": self.n_completed,
            "n_max_rounds": self.n_max_rounds,
            "n_errors": self.n_errors,
        }

    def render_table(self) -> str:
        def fmt(v: Optional[float]) -> str:
            return "-" if v is None else f"{v:.2f}"

        header = f"{'metric':<8}{'value':>10}"
        rows = [
            ("RC", self.rc),
            ("CR", self.cr),
            ("SR", self.sr),
            ("RQ", self.rq),
            ("CS_A", self.cs_a),
            ("CS_B", self.cs_b),
        ]
        lines = [header, "-" * len(header)]
        lines += [f"{name:<8}{fmt(value):>10}" for name, value in rows]
        lines.append(f"(n_tasks={self.n_tasks}, completed={self.n_completed}, "
                     f"max_rounds={self.n_max_rounds}, errors={self.n_errors})")
        return "\n".join(lines)


class DialogueSystem(Protocol):
    """Anything that can hold one episode: our engine or a plain-LLM baseline."""

    label: str

    def respond(self, user_message: str, round_no: int) -> str: ...
    def is_complete(self) -> bool: ...
    def checklist_marks(self) -> Optional[dict[str, bool]]: ...


class EngineSystem:
    """Episode adapter around the stack-based dialogue engine."""

    label = "engine"

    def __init__(self, engine: DialogueEngine, task: TaskDefinition):
        self.engine = engine
        self.task = task
        self.session: SessionState = engine.start_session(task)

    def respond(self, user_message: str, round_no: int) -> str:
        return self.engine.take_turn(self.session, user_message).response

    def is_complete(self) -> bool:
        return self.session.completion is Completion.COMPLETE

    def checklist_marks(self) -> Optional[dict[str, bool]]:
        finished = {
            t.source_item_id
            for t in self.session.stack._finished_topics.values()
            if t.source_item_id
        }
        return {item.item_id: item.item_id in finished for item in self.task.checklist}


class BaselineSystem:
    """Plain single-LLM system: goal and checklist live in one chat prompt."""

    label = "baseline"

    def __init__(self, backend: Backend, task: TaskDefinition):
        self.backend = backend
        self.task = task
        self.history: list[ChatMessage] = []

    def respond(self, user_message: str, round_no: int) -> str:
        self.history.append(ChatMessage(round=round_no, speaker=Speaker.USER, text=user_message))
        checklist = "\n".join(f"- {i.title}: {i.description}" for i in self.task.checklist)
        history = "\n".join(f"{m.speaker.value}: {m.text}" for m in self.history)
        prompt = (
            f"{self.task.system_role}\n\nYour goal: {self.task.goal}\n"
            f"Work through this checklist with the user:\n{checklist}\n\n"
            f"Conversation so far:\n{history}\n\nWrite the next system reply."
        )
        text = complete(self.backend, CompletionRequest(prompt=prompt, role_tag="chat"))
        self.history.append(ChatMessage(round=round_no, speaker=Speaker.SYSTEM, text=text))
        return text

    def is_complete(self) -> bool:
        return False  # a plain LLM never signals completion; the judge decides

    def checklist_marks(self) -> Optional[dict[str, bool]]:
        return None


def simulate_user(
    scenario: TaskDefinition,
    history: list[ChatMessage],
    backend: Backend,
    pack: PromptPack,
) -> str:
    """One simulator call; `[DONE]` signals the simulated user's goal is met."""
    rendered = (
        "\n".join(f"{m.speaker.value}: {m.text}" for m in history)
        if history
        else "(conversation has not started)"
    )
    bindings = {
        "scenario": scenario.scenario,
        "goal": scenario.goal,
        "history": rendered,
    }
    text = complete(
        backend,
        CompletionRequest.from_template(pack.get("simulator"), bindings, role_tag="simulator"),
    )
    if not text.strip():
        raise VerdictParseError("simulator returned empty output")
    return text


def run_episode(
    system: DialogueSystem,
    scenario: TaskDefinition,
    backend: Backend,
    pack: PromptPack,
    max_rounds: int = DEFAULT_MAX_ROUNDS,
) -> Transcript:
    """Alternate simulator and system turns until completion or the round cap."""
    if max_rounds < 1:
        raise ValueError("max_rounds must be >= 1")
    transcript = Transcript(task_id=scenario.task_id, system_label=system.label)
    try:
        for round_no in range(1, max_rounds + 1):
            user_text = simulate_user(scenario, transcript.messages, backend, pack)
            if DONE_TOKEN in user_text:
                transcript.terminated_by = Termination.COMPLETION
                break
            transcript.messages.append(
                ChatMessage(round=round_no, speaker=Speaker.USER, text=user_text)
            )
            response = system.respond(user_text, round_no)
            transcript.messages.append(
                ChatMessage(round=round_no, speaker=Speaker.SYSTEM, text=response)
            )
            transcript.rounds = round_no
            if system.is_complete():
                transcript.terminated_by = Termination.COMPLETION
                break
        else:
            transcript.terminated_by = Termination.MAX_ROUNDS
    except StacktalkError as exc:
        transcript.terminated_by = Termination.ERROR
        transcript.error = str(exc)
        # Drop a dangling user message so only complete rounds remain.
        if transcript.messages and transcript.messages[-1].speaker is Speaker.USER:
            transcript.messages.pop()
        transcript.rounds = sum(1 for m in transcript.messages if m.speaker is Speaker.USER)
    transcript.checklist_marks = system.checklist_marks()
    return transcript


def _extract_json(text: str) -> dict:
    fence = re.search(r"```(?:json)?\s*\n(.*?)\n\s*```", text, re.DOTALL)
    if fence:
        text = fence.group(1)
    start = text.find("{")
    end = text.rfind("}")
    if start == -1 or end <= start:
        raise ValueError("no JSON object in output")
    return json.loads(text[start : end + 1])


def judge_grade(
    transcript: Transcript,
    scenario: TaskDefinition,
    backend: Backend,
    pack: PromptPack,
) -> GradeVerdict:
    """Grade one transcript: RQ in [1,10], success flag, per-item completion."""
    if not transcript.messages:
        raise ValueError("cannot grade an empty transcript")
    checklist = "\n".join(f"- {i.item_id}: {i.title}" for i in scenario.checklist)
    bindings = {
        "goal": scenario.goal,
        "checklist": checklist,
        "history": transcript.render(),
        "criteria": "\n".join(f"- {c}" for c in JUDGE_CRITERIA),
    }
    template = pack.get("judge_grade")
    raw = complete(
        backend, CompletionRequest.from_template(template, bindings, role_tag="judge")
    )
    try:
        return _parse_grade(raw, scenario)
    except (ValueError, KeyError, TypeError) as exc:
        first_error = exc
        logger.debug("grade verdict rejected (%s); re-prompting", first_error)
    repair = dict(
        bindings,
        history=bindings["history"]
        + f"\n\n(Your previous verdict was unparseable: {first_error}. "
        "Return only the JSON object.)",
    )
    raw2 = complete(
        backend, CompletionRequest.from_template(template, repair, role_tag="judge")
    )
    try:
        return _parse_grade(raw2, scenario)
    except (ValueError, KeyError, TypeError) as second_error:
        raise VerdictParseError(f"grade verdict unparseable twice: {second_error}")


def _parse_grade(raw: str, scenario: TaskDefinition) -> GradeVerdict:
    data = _extract_json(raw)
    rq = float(data["rq"])
    clamped = False
    if rq < 1 or rq > 10:
        logger.warning("judge RQ %.1f outside [1,10]; clamping", rq)
        rq = min(10.0, max(1.0, rq))
        clamped = True
    success = int(data["success"])
    if success not in (0, 1):
        raise ValueError(f"success must be 0 or 1, got {success}")
    raw_items = data.get("items", {})
    per_item = {
        item.item_id: bool(raw_items.get(item.item_id, False))
        for item in scenario.checklist
    }
    return GradeVerdict(rq=rq, success=success, per_item=per_item, clamped=clamped)


def _one_comparison_run(
    first: Transcript,
    second: Transcript,
    scenario: TaskDefinition,
    backend: Backend,
    pack: PromptPack,
) -> str:
    """Returns 'first' | 'second' | 'tie' in terms of presentation position."""
    bindings = {
        "goal": scenario.goal,
        "history_first": first.render(),
        "history_second": second.render(),
    }
    raw = complete(
        backend,
        CompletionRequest.from_template(pack.get("judge_compare"), bindings, role_tag="judge"),
    )
    data = _extract_json(raw)
    winner = str(data["winner"]).strip().lower()
    if winner not in ("first", "second", "tie"):
        raise ValueError(f"winner must be first/second/tie, got '{winner}'")
    return winner


def judge_compare(
    transcript_a: Transcript,
    transcript_b: Transcript,
    scenario: TaskDefinition,
    backend: Backend,
    pack: PromptPack,
) -> ComparisonOutcome:
    """Two judge calls with operand order swapped; scores averaged over runs."""
    if transcript_a.task_id != transcript_b.task_id:
        raise ValueError("compared transcripts must share a task_id")

    degraded = 0
    winners: list[str] = []
    for run, (first, second) in enumerate(
        [(transcript_a, transcript_b), (transcript_b, transcript_a)], start=1
    ):
        try:
            positional = _one_comparison_run(first, second, scenario, backend, pack)
        except (ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
            logger.warning("comparison run %d unparseable (%s); scoring as tie", run, exc)
            winners.append("tie")
            degraded += 1
            continue
        if positional == "tie":
            winners.append("tie")
        elif run == 1:
            winners.append("A" if positional == "first" else "B")
        else:  # run 2 presents B first
            winners.append("B" if positional == "first" else "A")

    def run_score(winner: str, side: str) -> float:
        if winner == "tie":
            return 0.5
        return 1.0 if winner == side else 0.0

    score_a = (run_score(winners[0], "A") + run_score(winners[1], "A")) / 2
    score_b = (run_score(winners[0], "B") + run_score(winners[1], "B")) / 2
    return ComparisonOutcome(
        task_id=transcript_a.task_id,
        run1_winner=winners[0],
        run2_winner=winners[1],
        score_a=score_a,
        score_b=score_b,
        degraded_runs=degraded,
    )


def compute_metrics(
    transcripts: list[Transcript],
    verdicts: Optional[list[GradeVerdict]] = None,
    outcomes: Optional[list[ComparisonOutcome]] = None,
) -> MetricsReport:
    """Aggregate RC/CR/SR/RQ over transcripts and CS over comparison outcomes."""
    if not transcripts and not outcomes:
        raise EmptyInput("nothing to aggregate")

    completed = [t for t in transcripts if t.terminated_by is Termination.COMPLETION]
    rc = sum(t.rounds for t in completed) / len(completed) if completed else None

    cr_values: list[float] = []
    sr_values: list[float] = []
    rq_values: list[float] = []

    verdict_by_index = list(verdicts or [])
    for i, t in enumerate(transcripts):
        verdict = verdict_by_index[i] if i < len(verdict_by_index) else None
        marks = t.checklist_marks
        if marks is None and verdict is not None:
            marks = verdict.per_item
        if marks:
            cr_values.append(sum(1 for v in marks.values() if v) / len(marks))
        if t.checklist_marks is not None:
            # Engine transcripts carry their own completion flag.
            sr_values.append(1.0 if t.terminated_by is Termination.COMPLETION else 0.0)
        elif verdict is not None:
            sr_values.append(float(verdict.success))
        if verdict is not None:
            rq_values.append(verdict.rq)

    report = MetricsReport(
        rc=rc,
        cr=sum(cr_values) / len(cr_values) if cr_values else None,
        sr=sum(sr_values) / len(sr_values) if sr_values else None,
        rq=sum(rq_values) / len(rq_values) if rq_values else None,
        cs_a=sum(o.score_a for o in outcomes) if outcomes else None,
        cs_b=sum(o.score_b for o in outcomes) if outcomes else None,
        n_tasks=len(transcripts) if transcripts else len(outcomes or []),
        n_completed=len(completed),
        n_max_rounds=sum(1 for t in transcripts if t.terminated_by is Termination.MAX_ROUNDS),
        n_errors=sum(1 for t in transcripts if t.terminated_by is Termination.ERROR),
    )
    return report
