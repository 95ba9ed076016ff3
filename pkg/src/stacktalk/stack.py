"""Topic stack: ordered dialogue state, one action applied per round.

Index 0 is the top of the stack and names the current topic. The structure is
approximately FIFO by checklist order but mutable via the five actions; stale
user-created topics are swept after each action.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

from .errors import EmptyStackFinish, InvalidJumpTarget
from .model import (
    Action,
    ActionKind,
    Category,
    Origin,
    TaskDefinition,
    Topic,
    TopicStatus,
    default_category,
)

DEFAULT_EVICTION_WINDOW = 3


@dataclass
class StackDelta:
    """Audit record of one action application, replayable onto a fresh stack."""

    action: Action
    round: int
    pushed: list[int] = field(default_factory=list)
    popped: list[int] = field(default_factory=list)
    reordered: bool = False
    evicted: list[int] = field(default_factory=list)
    pushed_topics: list[Topic] = field(default_factory=list)  # snapshots at push time

    def to_dict(self) -> dict[str, Any]:
        return {
            "action": self.action.to_dict(),
            "round": self.round,
            "pushed": list(self.pushed),
            "popped": list(self.popped),
            "reordered": self.reordered,
            "evicted": list(self.evicted),
            "pushed_topics": [t.to_dict() for t in self.pushed_topics],
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "StackDelta":
        return cls(
            action=Action.from_dict(d["action"]),
            round=d["round"],
            pushed=list(d["pushed"]),
            popped=list(d["popped"]),
            reordered=d["reordered"],
            evicted=list(d["evicted"]),
            pushed_topics=[Topic.from_dict(t) for t in d.get("pushed_topics", [])],
        )


class TopicStack:
    """Ordered store of live topics plus append-only finished/evicted logs."""

    def __init__(self) -> None:
        self.entries: list[Topic] = []
        self.finished_log: list[tuple[int, int]] = []  # (topic_id, finishing round)
        self.evicted_log: list[Topic] = []
        self._next_id = 1
        self._finished_topics: dict[int, Topic] = {}

    # -- introspection ----------------------------------------------------

    def current_topic(self) -> Optional[Topic]:
        return self.entries[0] if self.entries else None

    def find(self, topic_id: int) -> Optional[Topic]:
        for t in self.entries:
            if t.id == topic_id:
                return t
        return None

    def entry_ids(self) -> list[int]:
        return [t.id for t in self.entries]

    def finished_topic(self, topic_id: int) -> Optional[Topic]:
        return self._finished_topics.get(topic_id)

    def checklist_progress(self, task: TaskDefinition) -> tuple[int, int]:
        """(completed, total) over the task's checklist items."""
        finished_items = {
            t.source_item_id for t in self._finished_topics.values() if t.source_item_id
        }
        completed = sum(1 for item in task.checklist if item.item_id in finished_items)
        return completed, len(task.checklist)

    # -- mutation ---------------------------------------------------------

    def _alloc_id(self) -> int:
        topic_id = self._next_id
        self._next_id += 1
        return topic_id

    def _refresh_statuses(self) -> None:
        for i, t in enumerate(self.entries):
            t.status = TopicStatus.ACTIVE if i == 0 else TopicStatus.PENDING

    def push_topic(
        self,
        title: str,
        origin: Origin,
        round: int,
        category: Optional[Category] = None,
        source_item_id: Optional[str] = None,
    ) -> Topic:
        topic = Topic(
            id=self._alloc_id(),
            title=title,
            origin=origin,
            category=category or default_category(origin),
            created_round=round,
            last_active_round=round,
            source_item_id=source_item_id,
        )
        self.entries.insert(0, topic)
        self._refresh_statuses()
        return topic

    def load_checklist(self, task: TaskDefinition, round: int) -> StackDelta:
        """Push checklist items so item 1 surfaces first; already-loaded items skipped."""
        delta = StackDelta(action=Action(kind=ActionKind.LOAD_TOPICS, task_id=task.task_id), round=round)
        present = {t.source_item_id for t in self.entries if t.source_item_id}
        present |= {t.source_item_id for t in self._finished_topics.values() if t.source_item_id}
        # Push in reverse checklist order so the first item ends up on top.
        for item in reversed(task.checklist):
            if item.item_id in present:
                continue
            topic = self.push_topic(
                title=item.title,
                origin=Origin.PREDEFINED,
                round=round,
                source_item_id=item.item_id,
            )
            delta.pushed.append(topic.id)
            delta.pushed_topics.append(Topic.from_dict(topic.to_dict()))
        self._refresh_statuses()
        return delta

    def apply_action(self, action: Action, round: int, task: Optional[TaskDefinition] = None) -> StackDelta:
        """Apply exactly one action; on error the stack is left unchanged."""
        if action.kind is ActionKind.LOAD_TOPICS:
            if task is None:
                raise ValueError("load_topics requires a task definition")
            return self.load_checklist(task, round)

        delta = StackDelta(action=action, round=round)

        if action.kind is ActionKind.CREATE_TOPIC:
            topic = self.push_topic(action.title or "", Origin.USER_CREATED, round)
            delta.pushed.append(topic.id)
            delta.pushed_topics.append(Topic.from_dict(topic.to_dict()))

        elif action.kind is ActionKind.FINISH_CURRENT:
            if not self.entries:
                raise EmptyStackFinish("finish_current on an empty stack")
            top = self.entries.pop(0)
            top.status = TopicStatus.FINISHED
            top.last_active_round = round
            self.finished_log.append((top.id, round))
            self._finished_topics[top.id] = top
            delta.popped.append(top.id)

        elif action.kind is ActionKind.STAY_CURRENT:
            if self.entries:
                self.entries[0].last_active_round = round

        elif action.kind is ActionKind.JUMP_TO:
            target = self.find(action.topic_id)  # type: ignore[arg-type]
            if target is None:
                raise InvalidJumpTarget(action.topic_id)  # type: ignore[arg-type]
            self.entries.remove(target)
            self.entries.insert(0, target)
            target.last_active_round = round
            delta.reordered = True

        self._refresh_statuses()
        return delta

    def sweep_evictions(self, current_round: int, window: int = DEFAULT_EVICTION_WINDOW) -> list[int]:
        """Remove stale user-created topics; predefined and top topics are immune."""
        if window < 1:
            raise ValueError("eviction window must be >= 1")
        evicted: list[int] = []
        survivors: list[Topic] = []
        for i, t in enumerate(self.entries):
            stale = (
                i != 0
                and t.origin is Origin.USER_CREATED
                and t.last_active_round <= current_round - window
            )
            if stale:
                t.status = TopicStatus.EVICTED
                self.evicted_log.append(t)
                evicted.append(t.id)
            else:
                survivors.append(t)
        self.entries = survivors
        self._refresh_statuses()
        return evicted

    # -- serialization ----------------------------------------------------

    def to_dict(self) -> dict[str, Any]:
        return {
            "entries": [t.to_dict() for t in self.entries],
            "finished_log": [list(pair) for pair in self.finished_log],
            "finished_topics": [t.to_dict() for t in self._finished_topics.values()],
            "evicted_log": [t.to_dict() for t in self.evicted_log],
            "next_id": self._next_id,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "TopicStack":
        stack = cls()
        stack.entries = [Topic.from_dict(t) for t in d["entries"]]
        stack.finished_log = [(p[0], p[1]) for p in d["finished_log"]]
        for t in (Topic.from_dict(x) for x in d.get("finished_topics", [])):
            stack._finished_topics[t.id] = t
        stack.evicted_log = [Topic.from_dict(t) for t in d.get("evicted_log", [])]
        stack._next_id = d["next_id"]
        return stack

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TopicStack):
            return NotImplemented
        return self.to_dict() == other.to_dict()


def render_stack_status(stack: TopicStack) -> str:
    """Deterministic top-first listing for prompts and the UI."""
    if not stack.entries:
        return "stack is empty"
    lines = []
    for i, t in enumerate(stack.entries):
        lines.append(
            f"[{i}] (id={t.id}) {t.title} ({t.origin.value}, {t.status.value}, "
            f"last_active=r{t.last_active_round})"
        )
    return "\n".join(lines)


def replay_deltas(deltas: list[StackDelta]) -> TopicStack:
    """Rebuild a stack from scratch by replaying recorded deltas."""
    stack = TopicStack()
    for delta in deltas:
        _replay_one(stack, delta)
    return stack


def _replay_one(stack: TopicStack, delta: StackDelta) -> None:
    kind = delta.action.kind
    if kind in (ActionKind.LOAD_TOPICS, ActionKind.CREATE_TOPIC):
        for snap in delta.pushed_topics:
            topic = Topic.from_dict(snap.to_dict())
            stack.entries.insert(0, topic)
            stack._next_id = max(stack._next_id, topic.id + 1)
    elif kind is ActionKind.FINISH_CURRENT:
        top = stack.entries.pop(0)
        top.status = TopicStatus.FINISHED
        top.last_active_round = delta.round
        stack.finished_log.append((top.id, delta.round))
        stack._finished_topics[top.id] = top
    elif kind is ActionKind.STAY_CURRENT:
        if stack.entries:
            stack.entries[0].last_active_round = delta.round
    elif kind is ActionKind.JUMP_TO:
        target = stack.find(delta.action.topic_id)  # type: ignore[arg-type]
        if target is None:
            raise InvalidJumpTarget(delta.action.topic_id)  # type: ignore[arg-type]
        stack.entries.remove(target)
        stack.entries.insert(0, target)
        target.last_active_round = delta.round
    for topic_id in delta.evicted:
        victim = stack.find(topic_id)
        if victim is not None:
            victim.status = TopicStatus.EVICTED
            stack.entries.remove(victim)
            stack.evicted_log.append(victim)
    stack._refresh_statuses()
