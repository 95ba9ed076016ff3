"""Exception hierarchy shared across the engine."""

from __future__ import annotations


class StacktalkError(Exception):
    """Base class for all engine errors."""


# --- stack ---------------------------------------------------------------

class InvalidJumpTarget(StacktalkError):
    """Jump action names a topic id that is not on the stack."""

    def __init__(self, topic_id: int):
        super().__init__(f"no topic with id {topic_id} on the stack")
        self.topic_id = topic_id


class EmptyStackFinish(StacktalkError):
    """Finish action issued against an empty stack."""


# --- templating / gateway ------------------------------------------------

class MissingSlot(StacktalkError):
    def __init__(self, name: str):
        super().__init__(f"required slot '{name}' is unbound")
        self.slot = name


class UnknownSlot(StacktalkError):
    def __init__(self, name: str):
        super().__init__(f"binding '{name}' matches no slot in the template")
        self.slot = name


class TransportError(StacktalkError):
    """Backend unreachable or returned a transport-level failure."""


class BudgetExceeded(StacktalkError):
    """Completion output exceeded the request's max_output budget."""


class GatewayFailure(StacktalkError):
    """A gateway call failed after retries were exhausted."""


# --- manager -------------------------------------------------------------

class ActionParseError(StacktalkError):
    """Model output could not be parsed into exactly one valid action."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


# --- pipeline / session --------------------------------------------------

class InvalidTask(StacktalkError):
    """Task definition failed validation."""


class SessionComplete(StacktalkError):
    """A turn was attempted on a session that already completed."""


class EmptyResponse(StacktalkError):
    """Chat agent returned an empty response twice in a row."""


# --- task library --------------------------------------------------------

class FormatError(StacktalkError):
    def __init__(self, path: str, reason: str):
        super().__init__(f"{path}: {reason}")
        self.path = path
        self.reason = reason


class DuplicateTaskId(StacktalkError):
    def __init__(self, task_id: str):
        super().__init__(f"duplicate task_id '{task_id}'")
        self.task_id = task_id


# --- evaluation ----------------------------------------------------------

class VerdictParseError(StacktalkError):
    """Judge output could not be parsed after a repair attempt."""


class EmptyInput(StacktalkError):
    """Metrics requested over an empty transcript set."""


# --- service -------------------------------------------------------------

class UnknownTask(StacktalkError):
    def __init__(self, task_id: str):
        super().__init__(f"unknown task '{task_id}'")
        self.task_id = task_id


class UnknownSession(StacktalkError):
    def __init__(self, session_id: str):
        super().__init__(f"unknown session '{session_id}'")
        self.session_id = session_id
