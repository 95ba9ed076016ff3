"""Shared domain types: topics, tasks, messages, actions, session state."""

from __future__ import annotations

import time
from dataclasses import dataclass, field, asdict
from enum import Enum
from typing import Any, Optional

MAX_TITLE_LEN = 200
CHECKLIST_STANDARD_SIZE = 6


class Origin(str, Enum):
    PREDEFINED = "predefined"
    USER_CREATED = "user_created"


class Category(str, Enum):
    ASK_USER = "ask_user"
    ANSWER_USER = "answer_user"


class TopicStatus(str, Enum):
    PENDING = "pending"
    ACTIVE = "active"
    FINISHED = "finished"
    EVICTED = "evicted"


class Speaker(str, Enum):
    USER = "user"
    SYSTEM = "system"


class ActionKind(str, Enum):
    LOAD_TOPICS = "load_topics"
    CREATE_TOPIC = "create_topic"
    FINISH_CURRENT = "finish_current"
    STAY_CURRENT = "stay_current"
    JUMP_TO = "jump_to"


class Completion(str, Enum):
    IN_PROGRESS = "in_progress"
    REPORT_PENDING = "report_pending"
    COMPLETE = "complete"


def default_category(origin: Origin) -> Category:
    """Predefined topics ask the user; user-created topics answer the user."""
    return Category.ASK_USER if origin is Origin.PREDEFINED else Category.ANSWER_USER


@dataclass
class Topic:
    """One subject of discussion tracked on the stack."""

    id: int
    title: str
    origin: Origin
    category: Category
    created_round: int
    last_active_round: int
    status: TopicStatus = TopicStatus.PENDING
    source_item_id: Optional[str] = None  # checklist item this topic realizes

    def __post_init__(self) -> None:
        if len(self.title) > MAX_TITLE_LEN:
            raise ValueError(f"topic title exceeds {MAX_TITLE_LEN} chars")
        if self.created_round < 1:
            raise ValueError("created_round must be >= 1")
        if self.last_active_round < self.created_round:
            raise ValueError("last_active_round must be >= created_round")

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "title": self.title,
            "origin": self.origin.value,
            "category": self.category.value,
            "created_round": self.created_round,
            "last_active_round": self.last_active_round,
            "status": self.status.value,
            "source_item_id": self.source_item_id,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "Topic":
        return cls(
            id=d["id"],
            title=d["title"],
            origin=Origin(d["origin"]),
            category=Category(d["category"]),
            created_round=d["created_round"],
            last_active_round=d["last_active_round"],
            status=TopicStatus(d["status"]),
            source_item_id=d.get("source_item_id"),
        )


@dataclass
class ChecklistItem:
    item_id: str
    title: str
    description: str = ""

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ChecklistItem":
        return cls(item_id=d["item_id"], title=d["title"], description=d.get("description", ""))


@dataclass
class TaskDefinition:
    """A task-oriented dialogue scenario: role, goal, and ordered checklist."""

    task_id: str
    scenario: str
    system_role: str
    goal: str
    checklist: list[ChecklistItem]
    knowledge: list[str] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "task_id": self.task_id,
            "scenario": self.scenario,
            "system_role": self.system_role,
            "goal": self.goal,
            "checklist": [item.to_dict() for item in self.checklist],
            "knowledge": list(self.knowledge),
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "TaskDefinition":
        return cls(
            task_id=d["task_id"],
            scenario=d["scenario"],
            system_role=d["system_role"],
            goal=d["goal"],
            checklist=[ChecklistItem.from_dict(i) for i in d["checklist"]],
            knowledge=list(d.get("knowledge", [])),
        )


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_task(task: TaskDefinition, strict_checklist_size: bool = True) -> ValidationReport:
    """Check a task against the dataset schema; violations are data, not failures."""
    report = ValidationReport()
    n = len(task.checklist)
    if strict_checklist_size and n != CHECKLIST_STANDARD_SIZE:
        report.violations.append(f"checklist size {n} != {CHECKLIST_STANDARD_SIZE}")
    elif not strict_checklist_size and n != CHECKLIST_STANDARD_SIZE:
        report.warnings.append(f"checklist size {n} != {CHECKLIST_STANDARD_SIZE}")
    if not (1 <= n <= 20):
        report.violations.append(f"checklist size {n} outside supported range 1-20")
    seen: set[str] = set()
    for item in task.checklist:
        if item.item_id in seen:
            report.violations.append(f"duplicate item_id '{item.item_id}'")
        seen.add(item.item_id)
    if not task.goal.strip():
        report.violations.append("goal is empty")
    if not task.task_id.strip():
        report.violations.append("task_id is empty")
    return report


@dataclass
class ChatMessage:
    round: int
    speaker: Speaker
    text: str
    timestamp: float = field(default_factory=time.time)

    def to_dict(self) -> dict[str, Any]:
        return {
            "round": self.round,
            "speaker": self.speaker.value,
            "text": self.text,
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ChatMessage":
        return cls(
            round=d["round"],
            speaker=Speaker(d["speaker"]),
            text=d["text"],
            timestamp=d.get("timestamp", 0.0),
        )


_PAYLOAD_REQUIRED = {ActionKind.CREATE_TOPIC, ActionKind.JUMP_TO}


@dataclass
class Action:
    """One stack command chosen per dialogue round."""

    kind: ActionKind
    title: Optional[str] = None     # create_topic payload
    topic_id: Optional[int] = None  # jump_to payload
    task_id: Optional[str] = None   # load_topics payload (optional)

    def __post_init__(self) -> None:
        if self.kind is ActionKind.CREATE_TOPIC and not (self.title or "").strip():
            raise ValueError("create_topic requires a non-empty title")
        if self.kind is ActionKind.JUMP_TO and self.topic_id is None:
            raise ValueError("jump_to requires a topic id")
        if self.kind not in _PAYLOAD_REQUIRED and self.kind is not ActionKind.LOAD_TOPICS:
            if self.title is not None or self.topic_id is not None or self.task_id is not None:
                raise ValueError(f"{self.kind.value} takes no payload")

    def to_text(self) -> str:
        """Canonical `kind[: payload]` line, losslessly parseable."""
        if self.kind is ActionKind.CREATE_TOPIC:
            return f"create_topic: {self.title}"
        if self.kind is ActionKind.JUMP_TO:
            return f"jump_to: {self.topic_id}"
        if self.kind is ActionKind.LOAD_TOPICS and self.task_id:
            return f"load_topics: {self.task_id}"
        return self.kind.value

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind.value,
            "title": self.title,
            "topic_id": self.topic_id,
            "task_id": self.task_id,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "Action":
        return cls(
            kind=ActionKind(d["kind"]),
            title=d.get("title"),
            topic_id=d.get("topic_id"),
            task_id=d.get("task_id"),
        )
