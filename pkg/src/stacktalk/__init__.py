"""Flexible task-oriented dialogue engine with an explicit topic stack."""

from .model import (
    Action,
    ActionKind,
    Category,
    ChatMessage,
    Completion,
    Origin,
    Speaker,
    TaskDefinition,
    Topic,
    TopicStatus,
    validate_task,
)
from .stack import TopicStack, StackDelta, render_stack_status, replay_deltas
from .gateway import (
    CompletionRequest,
    PromptPack,
    PromptTemplate,
    ScriptedBackend,
    complete,
    render_template,
)
from .manager import ActionCatalog, ActionDecision, decide_action, parse_action_output
from .pipeline import (
    DialogueEngine,
    EngineConfig,
    SessionState,
    TurnResult,
    completion_status,
    start_session,
)
from .tasks import TaskLibrary, list_scenarios, load_bundled_library, load_library

__version__ = "0.1.0"
