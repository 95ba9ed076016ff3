"""Language-model gateway: prompt templating plus HTTP and scripted backends.

Every agent in the engine goes through `complete()`, so swapping the scripted
backend in makes the whole system deterministic and offline-testable.
"""

from __future__ import annotations

import logging
import os
import re
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Protocol, Union

from .errors import BudgetExceeded, MissingSlot, TransportError, UnknownSlot

logger = logging.getLogger(__name__)

# One left-to-right scan so `{slot}` binds before a trailing `}}` escape.
_TOKEN_RE = re.compile(r"\{\{|\}\}|\{([a-zA-Z_][a-zA-Z0-9_]*)\}")


def _template_slots(text: str) -> tuple[str, ...]:
    return tuple(
        dict.fromkeys(m.group(1) for m in _TOKEN_RE.finditer(text) if m.group(1))
    )

TEMPLATE_FILES = (
    "manager.txt",
    "enricher.txt",
    "chat.txt",
    "action_create.txt",
    "action_finish.txt",
    "action_stay.txt",
    "action_jump.txt",
    "action_load.txt",
    "simulator.txt",
    "judge_grade.txt",
    "judge_compare.txt",
)


@dataclass(frozen=True)
class PromptTemplate:
    """Prompt text with `{variable}` slots; literal braces escape as {{ }}."""

    name: str
    text: str
    required_slots: tuple[str, ...]

    @classmethod
    def from_text(cls, name: str, text: str) -> "PromptTemplate":
        return cls(name=name, text=text, required_slots=_template_slots(text))


def render_template(template: PromptTemplate, bindings: dict[str, str]) -> str:
    """Fill every slot; missing or extraneous bindings are errors."""
    for slot in template.required_slots:
        if slot not in bindings:
            raise MissingSlot(slot)
    for name in bindings:
        if name not in template.required_slots:
            raise UnknownSlot(name)

    def sub(m: re.Match) -> str:
        token = m.group(0)
        if token == "{{":
            return "{"
        if token == "}}":
            return "}"
        return bindings[m.group(1)]

    return _TOKEN_RE.sub(sub, template.text)


class PromptPack:
    """Directory of named templates for one prompt profile (full/simplified)."""

    def __init__(self, templates: dict[str, PromptTemplate], profile: str):
        self.templates = templates
        self.profile = profile

    @classmethod
    def load(cls, root: Union[str, Path], profile: str = "full") -> "PromptPack":
        base = Path(root) / profile
        templates = {}
        for fname in TEMPLATE_FILES:
            path = base / fname
            name = path.stem
            templates[name] = PromptTemplate.from_text(name, path.read_text(encoding="utf-8"))
        return cls(templates, profile)

    def get(self, name: str) -> PromptTemplate:
        return self.templates[name]


def default_prompt_root() -> Path:
    return Path(__file__).resolve().parent / "prompts"


@dataclass
class CompletionRequest:
    prompt: str
    role_tag: str
    temperature: float = 0.0
    max_output: int = 4096

    @classmethod
    def from_template(
        cls,
        template: PromptTemplate,
        bindings: dict[str, str],
        role_tag: str,
        temperature: float = 0.0,
        max_output: int = 4096,
    ) -> "CompletionRequest":
        return cls(
            prompt=render_template(template, bindings),
            role_tag=role_tag,
            temperature=temperature,
            max_output=max_output,
        )


class Backend(Protocol):
    def complete(self, request: CompletionRequest) -> str: ...


Matcher = Callable[[str, str], bool]


@dataclass
class ScriptedRule:
    matcher: Matcher
    response: str


@dataclass
class CallRecord:
    role_tag: str
    prompt: str
    temperature: float
    response: str


class ScriptedBackend:
    """Deterministic rule-based stand-in for the language model.

    Resolution order: first matching rule, then the role's FIFO queue,
    then the default response. Thread-safe; every call is logged.
    """

    def __init__(self, default_response: str = "OK.") -> None:
        self.rules: list[ScriptedRule] = []
        self.default_response = default_response
        self.call_log: list[CallRecord] = []
        self._queues: dict[str, list[str]] = {}
        self._lock = threading.Lock()

    def add_rule(self, matcher: Matcher, response: str) -> None:
        self.rules.append(ScriptedRule(matcher, response))

    def when_role(self, role_tag: str, response: str) -> None:
        self.add_rule(lambda role, _prompt, tag=role_tag: role == tag, response)

    def when_contains(self, role_tag: str, needle: str, response: str) -> None:
        self.add_rule(
            lambda role, prompt, tag=role_tag, n=needle: role == tag and n in prompt,
            response,
        )

    def queue_responses(self, role_tag: str, responses: list[str]) -> None:
        self._queues.setdefault(role_tag, []).extend(responses)

    def complete(self, request: CompletionRequest) -> str:
        with self._lock:
            response = None
            for rule in self.rules:
                if rule.matcher(request.role_tag, request.prompt):
                    response = rule.response
                    break
            if response is None:
                queue = self._queues.get(request.role_tag)
                if queue:
                    response = queue.pop(0)
            if response is None:
                response = self.default_response
            self.call_log.append(
                CallRecord(request.role_tag, request.prompt, request.temperature, response)
            )
            return response

    def calls_for(self, role_tag: str) -> list[CallRecord]:
        return [c for c in self.call_log if c.role_tag == role_tag]


class FailingBackend:
    """Wrapper that raises TransportError from the Nth call onward.

    Models a backend going down mid-turn; used for atomicity fuzzing.
    """

    def __init__(self, inner: Backend, fail_from_call: int):
        self.inner = inner
        self.fail_from_call = fail_from_call
        self.calls = 0

    def complete(self, request: CompletionRequest) -> str:
        self.calls += 1
        if self.calls >= self.fail_from_call:
            raise TransportError("backend down (injected)")
        return self.inner.complete(request)


@dataclass
class HttpBackendConfig:
    base_url: str
    model: str
    api_key_env: str = "STACKTALK_API_KEY"
    retry_limit: int = 3
    timeout: float = 60.0
    extra_headers: dict[str, str] = field(default_factory=dict)


class HttpBackend:
    """Chat-completions-shaped HTTP backend; vendor chosen purely by config."""

    def __init__(self, config: HttpBackendConfig):
        self.config = config

    def complete(self, request: CompletionRequest) -> str:
        import httpx

        headers = {"Content-Type": "application/json", **self.config.extra_headers}
        api_key = os.environ.get(self.config.api_key_env)
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        payload = {
            "model": self.config.model,
            "messages": [{"role": "user", "content": request.prompt}],
            "temperature": request.temperature,
        }
        last_error: Optional[Exception] = None
        for attempt in range(1, self.config.retry_limit + 1):
            try:
                resp = httpx.post(
                    f"{self.config.base_url.rstrip('/')}/chat/completions",
                    json=payload,
                    headers=headers,
                    timeout=self.config.timeout,
                )
                resp.raise_for_status()
                data = resp.json()
                return data["choices"][0]["message"]["content"]
            except Exception as exc:  # transport or schema failure
                last_error = exc
                logger.warning("completion attempt %d/%d failed: %s", attempt, self.config.retry_limit, exc)
        raise TransportError(f"backend unreachable after {self.config.retry_limit} attempts: {last_error}")


def complete(backend: Backend, request: CompletionRequest) -> str:
    """Run one completion and enforce the output budget."""
    text = backend.complete(request)
    if len(text) > request.max_output:
        raise BudgetExceeded(
            f"completion length {len(text)} exceeds budget {request.max_output}"
        )
    return text
