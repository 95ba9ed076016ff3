"""Topic manager: obtain exactly one validated stack action per round.

The model replies in the canonical grammar `kind[: payload]`; the parser
tolerates surrounding prose, enforces the one-action rule, and validates
payloads against the live stack. One repair round-trip is attempted before
falling back to stay_current.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass

from .errors import ActionParseError, TransportError, GatewayFailure
from .gateway import Backend, CompletionRequest, PromptPack, complete
from .model import Action, ActionKind, ChatMessage
from .stack import TopicStack, render_stack_status

logger = logging.getLogger(__name__)

ACTION_DESCRIPTION_FILES = {
    ActionKind.LOAD_TOPICS: "action_load",
    ActionKind.CREATE_TOPIC: "action_create",
    ActionKind.FINISH_CURRENT: "action_finish",
    ActionKind.STAY_CURRENT: "action_stay",
    ActionKind.JUMP_TO: "action_jump",
}

SIMPLIFIED_KINDS = (
    ActionKind.CREATE_TOPIC,
    ActionKind.FINISH_CURRENT,
    ActionKind.STAY_CURRENT,
)

FULL_KINDS = tuple(ActionKind)


@dataclass
class ActionCatalog:
    """The action list handed to the manager prompt."""

    kinds: tuple[ActionKind, ...]
    descriptions: dict[ActionKind, str]
    profile: str = "full"

    @classmethod
    def from_pack(cls, pack: PromptPack) -> "ActionCatalog":
        kinds = SIMPLIFIED_KINDS if pack.profile == "simplified" else FULL_KINDS
        descriptions = {
            kind: pack.get(ACTION_DESCRIPTION_FILES[kind]).text.strip()
            for kind in kinds
        }
        return cls(kinds=kinds, descriptions=descriptions, profile=pack.profile)

    def render(self) -> str:
        return "\n\n".join(self.descriptions[k] for k in self.kinds)


@dataclass
class ActionDecision:
    """Audit record of one manager decision."""

    action: Action
    raw_output: str
    repaired: bool = False
    fallback_used: bool = False

    def to_dict(self) -> dict:
        return {
            "action": self.action.to_dict(),
            "raw_output": self.raw_output,
            "repaired": self.repaired,
            "fallback_used": self.fallback_used,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ActionDecision":
        return cls(
            action=Action.from_dict(d["action"]),
            raw_output=d["raw_output"],
            repaired=d["repaired"],
            fallback_used=d["fallback_used"],
        )


_KIND_TOKEN_RE = re.compile(
    r"\b(load_topics|create_topic|finish_current|stay_current|jump_to)\b"
)


def parse_action_output(text: str, stack: TopicStack, catalog: ActionCatalog) -> Action:
    """Parse model output into one Action, enforcing the one-action rule."""
    matches = list(_KIND_TOKEN_RE.finditer(text))
    allowed = {k.value for k in catalog.kinds}
    matches = [m for m in matches if m.group(1) in allowed]
    if not matches:
        raise ActionParseError("no recognizable action in output")
    distinct = {m.group(1) for m in matches}
    if len(distinct) > 1 or len(matches) > 1:
        raise ActionParseError(
            f"multiple actions in output: {sorted(m.group(1) for m in matches)}"
        )

    match = matches[0]
    kind = ActionKind(match.group(1))
    # Payload: everything after `kind:` up to the end of the line.
    rest = text[match.end():]
    line_rest = rest.split("\n", 1)[0]
    payload = None
    stripped = line_rest.lstrip()
    if stripped.startswith(":"):
        payload = stripped[1:].strip()

    if kind is ActionKind.CREATE_TOPIC:
        if not payload:
            raise ActionParseError("create_topic requires a title payload")
        return Action(kind=kind, title=payload)
    if kind is ActionKind.JUMP_TO:
        if not payload:
            raise ActionParseError("jump_to requires a topic id payload")
        try:
            topic_id = int(payload)
        except ValueError:
            raise ActionParseError(f"jump_to payload '{payload}' is not a topic id")
        if stack.find(topic_id) is None:
            raise ActionParseError(f"invalid jump target {topic_id}: not on the stack")
        return Action(kind=kind, topic_id=topic_id)
    if kind is ActionKind.LOAD_TOPICS:
        return Action(kind=kind, task_id=payload or None)
    return Action(kind=kind)


def _validate_for_stack(action: Action, stack: TopicStack) -> None:
    """Contextual checks beyond pure parsing."""
    if not stack.entries:
        if action.kind not in (ActionKind.CREATE_TOPIC, ActionKind.LOAD_TOPICS):
            raise ActionParseError(
                f"{action.kind.value} is not valid on an empty stack"
            )


def _render_history(history: list[ChatMessage], limit: int = 20) -> str:
    if not history:
        return "(no messages yet)"
    lines = [f"[r{m.round}] {m.speaker.value}: {m.text}" for m in history[-limit:]]
    return "\n".join(lines)


def decide_action(
    query: str,
    stack: TopicStack,
    history: list[ChatMessage],
    catalog: ActionCatalog,
    backend: Backend,
    pack: PromptPack,
) -> ActionDecision:
    """One manager consultation with a single repair attempt and safe fallback."""
    bindings = {
        "query": query,
        "actions": catalog.render(),
        "stack": render_stack_status(stack),
        "history": _render_history(history),
    }
    template = pack.get("manager")

    try:
        raw = complete(
            backend,
            CompletionRequest.from_template(template, bindings, role_tag="manager"),
        )
    except TransportError as exc:
        raise GatewayFailure(f"manager backend failed: {exc}") from exc

    try:
        action = parse_action_output(raw, stack, catalog)
        _validate_for_stack(action, stack)
        return ActionDecision(action=action, raw_output=raw)
    except ActionParseError as exc:
        first_error = exc
        logger.debug("manager output rejected (%s); re-prompting", first_error)

    repair_prompt = (
        bindings["query"]
        + f"\n\nYour previous reply could not be applied: {first_error}."
        + " Reply again with exactly one valid action line."
    )
    repair_bindings = dict(bindings, query=repair_prompt)
    try:
        raw2 = complete(
            backend,
            CompletionRequest.from_template(template, repair_bindings, role_tag="manager"),
        )
    except TransportError as exc:
        raise GatewayFailure(f"manager backend failed: {exc}") from exc

    try:
        action = parse_action_output(raw2, stack, catalog)
        _validate_for_stack(action, stack)
        return ActionDecision(action=action, raw_output=raw2, repaired=True)
    except ActionParseError as second_error:
        logger.warning("manager repair failed (%s); falling back to stay", second_error)
        return ActionDecision(
            action=Action(kind=ActionKind.STAY_CURRENT),
            raw_output=raw2,
            repaired=True,
            fallback_used=True,
        )
