from __future__ import annotations

import pytest

from stacktalk.errors import ActionParseError, GatewayFailure
from stacktalk.gateway import FailingBackend, ScriptedBackend
from stacktalk.manager import (
    ActionCatalog,
    FULL_KINDS,
    SIMPLIFIED_KINDS,
    decide_action,
    parse_action_output,
)
from stacktalk.model import Action, ActionKind
from stacktalk.stack import TopicStack


@pytest.fixture
def catalog(full_pack):
    return ActionCatalog.from_pack(full_pack)


@pytest.fixture
def loaded_stack(clinical_task):
    stack = TopicStack()
    stack.load_checklist(clinical_task, round=1)
    return stack


class TestCatalog:
    def test_full_profile_has_all_five_kinds(self, catalog):
        assert catalog.kinds == FULL_KINDS

    def test_simplified_profile_drops_jump_and_load(self, simplified_pack):
        catalog = ActionCatalog.from_pack(simplified_pack)
        assert catalog.kinds == SIMPLIFIED_KINDS
        assert ActionKind.JUMP_TO not in catalog.kinds
        assert ActionKind.LOAD_TOPICS not in catalog.kinds

    def test_render_lists_every_kind(self, catalog):
        text = catalog.render()
        for kind in catalog.kinds:
            assert kind.value in text


class TestParseActionOutput:
    def test_create_with_title(self, loaded_stack, catalog):
        action = parse_action_output("create_topic: COVID-19 symptoms", loaded_stack, catalog)
        assert action == Action(kind=ActionKind.CREATE_TOPIC, title="COVID-19 symptoms")

    def test_bare_kind(self, loaded_stack, catalog):
        action = parse_action_output("stay_current", loaded_stack, catalog)
        assert action.kind is ActionKind.STAY_CURRENT

    def test_prose_around_action_tolerated(self, loaded_stack, catalog):
        action = parse_action_output(
            "Looking at the stack, I believe we should finish_current now.",
            loaded_stack,
            catalog,
        )
        assert action.kind is ActionKind.FINISH_CURRENT

    def test_multiple_actions_rejected(self, loaded_stack, catalog):
        with pytest.raises(ActionParseError, match="multiple"):
            parse_action_output(
                "I think we should finish_current and also jump_to: 2",
                loaded_stack,
                catalog,
            )

    def test_invalid_jump_target(self, loaded_stack, catalog):
        with pytest.raises(ActionParseError, match="jump target"):
            parse_action_output("jump_to: 99", loaded_stack, catalog)

    def test_valid_jump_target(self, loaded_stack, catalog):
        target = loaded_stack.entry_ids()[2]
        action = parse_action_output(f"jump_to: {target}", loaded_stack, catalog)
        assert action == Action(kind=ActionKind.JUMP_TO, topic_id=target)

    def test_jump_payload_must_be_numeric(self, loaded_stack, catalog):
        with pytest.raises(ActionParseError, match="not a topic id"):
            parse_action_output("jump_to: the first one", loaded_stack, catalog)

    def test_create_without_title_rejected(self, loaded_stack, catalog):
        with pytest.raises(ActionParseError, match="title"):
            parse_action_output("create_topic", loaded_stack, catalog)

    def test_gibberish_rejected(self, loaded_stack, catalog):
        with pytest.raises(ActionParseError, match="no recognizable"):
            parse_action_output("do something nice", loaded_stack, catalog)

    def test_simplified_profile_rejects_jump(self, loaded_stack, simplified_pack):
        catalog = ActionCatalog.from_pack(simplified_pack)
        target = loaded_stack.entry_ids()[0]
        with pytest.raises(ActionParseError):
            parse_action_output(f"jump_to: {target}", loaded_stack, catalog)

    def test_canonical_text_round_trips(self, loaded_stack, catalog):
        target = loaded_stack.entry_ids()[1]
        for action in (
            Action(kind=ActionKind.STAY_CURRENT),
            Action(kind=ActionKind.FINISH_CURRENT),
            Action(kind=ActionKind.CREATE_TOPIC, title="side question"),
            Action(kind=ActionKind.JUMP_TO, topic_id=target),
            Action(kind=ActionKind.LOAD_TOPICS),
        ):
            assert parse_action_output(action.to_text(), loaded_stack, catalog) == action


class TestDecideAction:
    def _decide(self, backend, stack, catalog, pack, query="hello"):
        return decide_action(query, stack, [], catalog, backend, pack)

    def test_clean_reply(self, loaded_stack, catalog, full_pack):
        b = ScriptedBackend()
        b.when_role("manager", "finish_current")
        decision = self._decide(b, loaded_stack, catalog, full_pack)
        assert decision.action.kind is ActionKind.FINISH_CURRENT
        assert not decision.repaired and not decision.fallback_used

    def test_repair_after_one_bad_reply(self, loaded_stack, catalog, full_pack):
        b = ScriptedBackend()
        b.queue_responses("manager", ["??", "stay_current"])
        decision = self._decide(b, loaded_stack, catalog, full_pack)
        assert decision.action.kind is ActionKind.STAY_CURRENT
        assert decision.repaired and not decision.fallback_used
        # Repair prompt carries the parse error back to the model.
        assert "could not be applied" in b.call_log[1].prompt

    def test_fallback_after_two_bad_replies(self, loaded_stack, catalog, full_pack):
        b = ScriptedBackend(default_response="gibberish")
        decision = self._decide(b, loaded_stack, catalog, full_pack)
        assert decision.action.kind is ActionKind.STAY_CURRENT
        assert decision.fallback_used

    def test_empty_stack_rejects_finish(self, catalog, full_pack):
        b = ScriptedBackend()
        b.queue_responses("manager", ["finish_current", "create_topic: greetings"])
        decision = self._decide(b, TopicStack(), catalog, full_pack)
        assert decision.action.kind is ActionKind.CREATE_TOPIC
        assert decision.repaired

    def test_backend_down_raises_gateway_failure(self, loaded_stack, catalog, full_pack):
        b = FailingBackend(ScriptedBackend(), fail_from_call=1)
        with pytest.raises(GatewayFailure):
            self._decide(b, loaded_stack, catalog, full_pack)

    def test_exactly_one_action_always_returned(self, loaded_stack, catalog, full_pack):
        for scripted in ("stay_current", "junk", "finish_current and jump_to: 1"):
            b = ScriptedBackend(default_response=scripted)
            decision = self._decide(b, loaded_stack, catalog, full_pack)
            assert decision.action is not None
