from __future__ import annotations

import pytest

from stacktalk.gateway import PromptPack, ScriptedBackend, default_prompt_root
from stacktalk.model import ChecklistItem, TaskDefinition
from stacktalk.pipeline import DialogueEngine
from stacktalk.tasks import load_bundled_library


@pytest.fixture(scope="session")
def library():
    return load_bundled_library()


@pytest.fixture(scope="session")
def clinical_task(library):
    return library.get("clinical")


@pytest.fixture(scope="session")
def hotel_task(library):
    return library.get("hotel")


@pytest.fixture(scope="session")
def full_pack():
    return PromptPack.load(default_prompt_root(), "full")


@pytest.fixture(scope="session")
def simplified_pack():
    return PromptPack.load(default_prompt_root(), "simplified")


@pytest.fixture
def backend():
    b = ScriptedBackend()
    b.when_role("enricher", "Work the current topic with the user.")
    b.when_role("context", "Earlier the user described their situation.")
    return b


@pytest.fixture
def engine(backend, full_pack):
    return DialogueEngine(backend, full_pack)


def make_task(n_items: int = 6, task_id: str = "demo") -> TaskDefinition:
    return TaskDefinition(
        task_id=task_id,
        scenario=task_id,
        system_role="You are a helpful consultant.",
        goal="Walk the user through the checklist.",
        checklist=[
            ChecklistItem(item_id=f"q{i+1}", title=f"Item {i+1}", description="")
            for i in range(n_items)
        ],
    )


# -- golden medical episode script -----------------------------------------
# One digression (COVID-19 question at round 4) inside the six-item clinical
# checklist, finishing with the synthetic final report.

GOLDEN_USER_MESSAGES = [
    "Hi doctor, I don't feel well.",
    "I'm 34, male, no major conditions.",
    "I have a sore throat and a cough.",
    "Could this be COVID-19? I heard the symptoms are similar.",
    "Thanks, that makes sense. Anyway, back to my symptoms.",
    "It started about four days ago.",
    "It's fairly mild, I can still work.",
    "I take no medication and have no allergies.",
    "I sleep poorly lately and traveled last week.",
    "Yes, please give me the summary.",
]

GOLDEN_MANAGER_ACTIONS = [
    "stay_current",
    "finish_current",
    "finish_current",
    "create_topic: COVID-19 concerns",
    "finish_current",
    "finish_current",
    "finish_current",
    "finish_current",
    "finish_current",
    "finish_current",
]

GOLDEN_CHAT_RESPONSES = [
    "Could you start with your age, sex, and general background?",
    "Thank you. What is the main problem that brought you in today?",
    "Got it. When did these symptoms start?",
    "COVID-19 can indeed cause a sore throat and cough; a test would tell you for sure.",
    "Of course. So, when exactly did the symptoms start?",
    "Understood. How severe are they - do they limit your day?",
    "Good. Any prior conditions, medications, or allergies?",
    "Noted. How are your sleep, diet, and any recent travel?",
    "Thanks, that completes the intake. Let me prepare your summary.",
    "Summary: mild viral-type symptoms for four days; rest, fluids, and a COVID test recommended.",
]


def scripted_golden_backend() -> ScriptedBackend:
    b = ScriptedBackend()
    b.queue_responses("manager", list(GOLDEN_MANAGER_ACTIONS))
    b.when_role("enricher", "Handle the current topic for this round.")
    b.when_role("context", "Earlier rounds: routine intake exchange.")
    b.queue_responses("chat", list(GOLDEN_CHAT_RESPONSES))
    b.queue_responses("simulator", list(GOLDEN_USER_MESSAGES) + ["[DONE]"])
    return b
