"""Acceptance criteria, one test per criterion.

Run with `pytest tests/test_acceptance.py -v -s` to see one PASS line per
criterion; any assertion failure marks that criterion red.
"""

from __future__ import annotations

import copy
import json
import random
import time

import pytest

from stacktalk.config import ServiceConfig
from stacktalk.errors import EmptyResponse, GatewayFailure
from stacktalk.evaluation import (
    ComparisonOutcome,
    GradeVerdict,
    Termination,
    Transcript,
    compute_metrics,
    judge_compare,
)
from stacktalk.gateway import FailingBackend, PromptPack, ScriptedBackend, default_prompt_root
from stacktalk.model import Action, ActionKind, ChatMessage, Completion, Origin, Speaker
from stacktalk.pipeline import DialogueEngine, EngineConfig
from stacktalk.service import build_service, replay_session
from stacktalk.stack import TopicStack, replay_deltas
from stacktalk.tasks import load_bundled_library, load_library
from conftest import (
    GOLDEN_MANAGER_ACTIONS,
    GOLDEN_USER_MESSAGES,
    make_task,
    scripted_golden_backend,
)

SCENARIO_NAMES = {
    "clinical", "restaurant", "hotel", "hospital", "train", "police", "bus",
    "attraction", "airport", "bar", "library", "museum", "park", "gym",
    "cinema", "office", "barbershop", "bakery", "zoo", "bank",
}


def ok(name: str) -> None:
    print(f"ACCEPTANCE PASS: {name}")


def test_stack_semantics_randomized_suite():
    """>=1000 random action sequences: multiset, one-action, eviction safety,
    replay equality. Must finish in under 10 seconds."""
    rng = random.Random(20240817)
    task = make_task(4, task_id="fuzz")
    started = time.monotonic()
    window = 3
    for _case in range(1000):
        stack = TopicStack()
        deltas = [stack.load_checklist(task, round=1)]
        created = set(stack.entry_ids())
        round_no = 1
        for _step in range(rng.randint(1, 12)):
            round_no += 1
            kind = rng.choice(["create", "finish", "stay", "jump"])
            if kind == "create":
                action = Action(kind=ActionKind.CREATE_TOPIC, title=f"t{round_no}")
            elif kind == "finish" and stack.entries:
                action = Action(kind=ActionKind.FINISH_CURRENT)
            elif kind == "jump" and stack.entries:
                action = Action(
                    kind=ActionKind.JUMP_TO, topic_id=rng.choice(stack.entry_ids())
                )
            else:
                action = Action(kind=ActionKind.STAY_CURRENT)

            before = set(stack.entry_ids())
            delta = stack.apply_action(action, round_no)
            after = set(stack.entry_ids())
            if action.kind is ActionKind.JUMP_TO:
                assert before == after, "jump must preserve the entry multiset"
            assert len(before.symmetric_difference(after)) <= 1, "one-action rule"
            top_id = stack.entries[0].id if stack.entries else None
            delta.evicted.extend(stack.sweep_evictions(round_no, window))
            for victim_id in delta.evicted:
                assert victim_id != top_id, "top topic evicted"
            deltas.append(delta)
            created |= set(delta.pushed)

        for victim in stack.evicted_log:
            assert victim.origin is Origin.USER_CREATED, "predefined topic evicted"
        live = set(stack.entry_ids())
        finished = {tid for tid, _ in stack.finished_log}
        evicted = {t.id for t in stack.evicted_log}
        assert live | finished | evicted == created
        assert not (live & finished) and not (live & evicted) and not (finished & evicted)

        replayed = replay_deltas(deltas)
        assert replayed.to_dict() == stack.to_dict(), "delta replay mismatch"
    elapsed = time.monotonic() - started
    assert elapsed < 10.0, f"randomized suite took {elapsed:.1f}s"
    ok(f"stack semantics suite (1000 cases in {elapsed:.2f}s)")


@pytest.mark.parametrize("creation_round", [1, 2, 3])
def test_eviction_timing_exact_boundary(creation_round):
    """A never-recalled user topic is evicted at the first sweep with
    current_round >= creation_round + W (W=3)."""
    window = 3
    stack = TopicStack()
    victim = stack.push_topic("digression", Origin.USER_CREATED, round=creation_round)
    # Another topic above it so the victim is never the protected top.
    stack.push_topic("current", Origin.USER_CREATED, round=creation_round)
    for current in range(creation_round, creation_round + window):
        stack.entries[0].last_active_round = current  # only the top is recalled
        assert stack.sweep_evictions(current, window) == [], (
            f"evicted too early at round {current}"
        )
    assert stack.sweep_evictions(creation_round + window, window) == [victim.id]
    ok(f"eviction timing (r={creation_round}, W={window})")


def _golden_run():
    backend = scripted_golden_backend()
    pack = PromptPack.load(default_prompt_root(), "full")
    engine = DialogueEngine(backend, pack)
    task = load_bundled_library().get("clinical")
    session = engine.start_session(task)
    results = [engine.take_turn(session, text) for text in GOLDEN_USER_MESSAGES]
    return backend, session, results


def test_golden_scripted_episode():
    """Medical episode: checklist in order, one digression with return,
    ends complete at 6/6, transcript byte-identical across runs."""
    _, session, results = _golden_run()

    finished_items = [
        session.stack.finished_topic(tid).source_item_id
        for tid, _ in session.stack.finished_log
        if session.stack.finished_topic(tid).source_item_id
    ]
    assert finished_items == [f"q{i}" for i in range(1, 7)], "checklist order violated"

    digression = results[3]
    assert digression.decision.action.kind is ActionKind.CREATE_TOPIC
    assert digression.decision.action.title == "COVID-19 concerns"
    resume = results[4]
    assert resume.decision.action.kind is ActionKind.FINISH_CURRENT
    # After the digression finishes, the checklist topic is current again.
    assert "symptoms start" in resume.response

    assert session.completion is Completion.COMPLETE
    assert session.stack.checklist_progress(session.task) == (6, 6)

    transcript = "\n".join(f"{m.speaker.value}: {m.text}" for m in session.history)
    _, session2, _ = _golden_run()
    transcript2 = "\n".join(f"{m.speaker.value}: {m.text}" for m in session2.history)
    assert transcript.encode() == transcript2.encode(), "transcript not byte-identical"
    ok("golden scripted episode (order, digression, 6/6, deterministic)")


def test_one_action_and_stage_order():
    """Every scripted turn applies exactly one action and the gateway log
    shows manager -> enricher -> chat within each turn."""
    backend, _session, results = _golden_run()

    for result in results:
        membership_change = len(result.delta.pushed) + len(result.delta.popped)
        if result.decision.action.kind is ActionKind.LOAD_TOPICS:
            continue
        assert membership_change <= 1, "more than one membership change in a turn"

    stage_of = {"manager": 0, "context": 1, "enricher": 1, "chat": 2}
    turns: list[list[str]] = []
    current: list[str] = []
    for call in backend.call_log:
        if call.role_tag == "manager" and current:
            turns.append(current)
            current = []
        current.append(call.role_tag)
    turns.append(current)
    assert len(turns) == len(GOLDEN_MANAGER_ACTIONS)
    for roles, result in zip(turns, results):
        assert roles[0] == "manager" and roles[-1] == "chat"
        # The enrichment stage only runs while a topic is on the stack; the
        # final turn of the episode pops the last one before this stage.
        stack_emptied = result.delta.popped and result.enriched.source_topic_id is None
        if not stack_emptied:
            assert "enricher" in roles
        stages = [stage_of[r] for r in roles]
        assert stages == sorted(stages), f"stage order violated: {roles}"
    ok("one-action rule + manager->enricher->chat stage order")


def test_metrics_arithmetic():
    """CR/SR reproduce the synthetic verdict shapes exactly; CS is zero-sum."""
    def transcript(task_id, rounds=7, terminated=Termination.COMPLETION):
        msgs = []
        for r in range(1, rounds + 1):
            msgs.append(ChatMessage(round=r, speaker=Speaker.USER, text=f"u{r}"))
            msgs.append(ChatMessage(round=r, speaker=Speaker.SYSTEM, text=f"s{r}"))
        return Transcript(task_id=task_id, system_label="x", messages=msgs,
                          rounds=rounds, terminated_by=terminated)

    # gpt-3.5-style row: per-item completion mean 0.8, judge success mean 0.4.
    transcripts = [transcript(f"t{i}") for i in range(5)]
    verdicts = [
        GradeVerdict(
            rq=7.8,
            success=1 if i < 2 else 0,
            per_item={"a": True, "b": True, "c": True, "d": True, "e": False},
        )
        for i in range(5)
    ]
    report = compute_metrics(transcripts, verdicts=verdicts)
    assert abs(report.cr - 0.8) <= 1e-9
    assert abs(report.sr - 0.4) <= 1e-9

    # All-success row: CR = SR = 1.0.
    full_marks = {f"q{i}": True for i in range(1, 7)}
    engine_transcripts = [
        Transcript(task_id=f"t{i}", system_label="engine", rounds=7,
                   terminated_by=Termination.COMPLETION, checklist_marks=full_marks,
                   messages=transcript(f"t{i}").messages)
        for i in range(5)
    ]
    full_report = compute_metrics(engine_transcripts)
    assert full_report.cr == 1.0 and full_report.sr == 1.0

    # CS zero-sum over 20 tasks, matching both published column sums.
    def outcome(task_id, score_a):
        return ComparisonOutcome(task_id, "A", "A", score_a, 1.0 - score_a)

    split_11_5 = [outcome(f"t{i}", 1.0) for i in range(10)] + \
        [outcome(f"t{i}", 0.5) for i in range(10, 13)] + \
        [outcome(f"t{i}", 0.0) for i in range(13, 20)]
    r1 = compute_metrics([], outcomes=split_11_5)
    assert (r1.cs_a, r1.cs_b) == (11.5, 8.5)
    assert r1.cs_a + r1.cs_b == 20.0

    split_15_5 = [outcome(f"t{i}", 1.0) for i in range(15)] + \
        [outcome(f"t{i}", 0.0) for i in range(15, 20)]
    r2 = compute_metrics([], outcomes=split_15_5)
    assert (r2.cs_a, r2.cs_b) == (15.0, 5.0)
    assert r2.cs_a + r2.cs_b == 20.0

    rng = random.Random(7)
    random_outcomes = [outcome(f"t{i}", rng.choice([0.0, 0.25, 0.5, 0.75, 1.0]))
                       for i in range(20)]
    r3 = compute_metrics([], outcomes=random_outcomes)
    assert r3.cs_a + r3.cs_b == 20.0
    ok("metrics arithmetic (CR=0.8, SR=0.4, all-success, CS zero-sum at n=20)")


def test_position_swap_protocol():
    """judge_compare makes exactly two calls with swapped operand order and
    split verdicts average to 0.5/0.5."""
    pack = PromptPack.load(default_prompt_root(), "full")
    task = load_bundled_library().get("hotel")

    def transcript(label, marker):
        return Transcript(
            task_id="hotel",
            system_label=label,
            messages=[
                ChatMessage(round=1, speaker=Speaker.USER, text="hi"),
                ChatMessage(round=1, speaker=Speaker.SYSTEM, text=marker),
            ],
            rounds=1,
            terminated_by=Termination.COMPLETION,
        )

    t_a = transcript("engine", "MARKER-ALPHA")
    t_b = transcript("baseline", "MARKER-BETA")

    backend = ScriptedBackend()
    backend.queue_responses(
        "judge", [json.dumps({"winner": "first"}), json.dumps({"winner": "first"})]
    )
    outcome = judge_compare(t_a, t_b, task, backend, pack)

    judge_calls = backend.calls_for("judge")
    assert len(judge_calls) == 2, "exactly two judge calls required"
    p1, p2 = judge_calls[0].prompt, judge_calls[1].prompt
    assert p1.index("MARKER-ALPHA") < p1.index("MARKER-BETA"), "run 1 must present A first"
    assert p2.index("MARKER-BETA") < p2.index("MARKER-ALPHA"), "run 2 must present B first"

    # "first" wins both runs = A wins run 1, B wins run 2 -> 0.5 each.
    assert outcome.score_a == 0.5 and outcome.score_b == 0.5
    assert outcome.score_a + outcome.score_b == 1.0
    ok("position-swap comparison protocol (2 calls, swapped, 0.5/0.5)")


def test_dataset_conformance(tmp_path):
    """Bundled library: 20 tasks x 6 items, scenario-named ids; strict loader
    rejects a 5-item task."""
    library = load_bundled_library()
    assert len(library) == 20
    assert set(library.tasks) == SCENARIO_NAMES
    for task in library.tasks.values():
        assert len(task.checklist) == 6

    bad = make_task(5, task_id="short")
    (tmp_path / "short.json").write_text(json.dumps(bad.to_dict()))
    from stacktalk.errors import FormatError

    with pytest.raises(FormatError):
        load_library(tmp_path, strict=True)
    ok("dataset conformance (20 tasks x 6 items, strict rejection)")


def test_turn_atomicity_fuzz():
    """Injected gateway failure at every call position of 50 turns leaves the
    session byte-identical to its pre-turn state."""
    pack = PromptPack.load(default_prompt_root(), "full")
    task = load_bundled_library().get("clinical")
    backend = ScriptedBackend()
    backend.when_role("manager", "stay_current")
    backend.when_role("context", "summary of earlier turns")
    backend.when_role("enricher", "enriched instruction")
    backend.when_role("chat", "a helpful reply")
    engine = DialogueEngine(backend, pack, EngineConfig(context_window=6))
    session = engine.start_session(task)

    checked = 0
    for turn in range(50):
        # Probe the number of gateway calls this turn will make.
        probe = copy.deepcopy(session)
        before_calls = len(backend.call_log)
        engine.take_turn(probe, f"probe {turn}")
        calls_per_turn = len(backend.call_log) - before_calls

        snapshot = json.dumps(session.to_dict(), sort_keys=True).encode()
        for position in range(1, calls_per_turn + 1):
            engine.backend = FailingBackend(backend, fail_from_call=position)
            with pytest.raises((GatewayFailure, EmptyResponse)):
                engine.take_turn(session, f"failing turn {turn}")
            assert json.dumps(session.to_dict(), sort_keys=True).encode() == snapshot, (
                f"state changed after failure at call {position} of turn {turn}"
            )
            checked += 1
        engine.backend = backend
        engine.take_turn(session, f"real message {turn}")
    assert checked >= 150
    ok(f"turn atomicity fuzz ({checked} injected failures over 50 turns)")


def test_service_event_log_replay():
    """Replaying a session's event log through handle_get_state reproduces the
    live snapshot exactly."""
    config = ServiceConfig(backend="scripted")
    service = build_service(config, backend=scripted_golden_backend())
    sid = service.handle_create_session("clinical")["session_id"]
    for text in GOLDEN_USER_MESSAGES:
        service.handle_post_message(sid, text)
    live = service.handle_get_state(sid)

    replayed = replay_session(service.store.event_log(sid))
    service.store.sessions[sid] = replayed
    assert service.handle_get_state(sid) == live
    ok("service event-log replay")
