"""Task library: load, validate, and enumerate scenario task files.

A dataset is a directory of `tasks/<task_id>.json` documents (or one JSON file
holding an array); the bundled set covers 20 consultation scenarios with a
six-item checklist each.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

from .errors import DuplicateTaskId, FormatError
from .model import TaskDefinition, validate_task

logger = logging.getLogger(__name__)


def bundled_dataset_path() -> Path:
    return Path(__file__).resolve().parent / "data" / "tasks"


@dataclass
class TaskLibrary:
    tasks: dict[str, TaskDefinition] = field(default_factory=dict)
    source_path: str = ""
    annotations: dict[str, list[str]] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.tasks)

    def get(self, task_id: str) -> TaskDefinition:
        return self.tasks[task_id]

    def __contains__(self, task_id: str) -> bool:
        return task_id in self.tasks


def _parse_task_doc(path: Path, doc: dict) -> TaskDefinition:
    try:
        return TaskDefinition.from_dict(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(str(path), f"bad task document: {exc}") from exc


def load_library(path: Union[str, Path], strict: bool = True) -> TaskLibrary:
    """Load every task under `path`; strict mode rejects any violation."""
    root = Path(path)
    library = TaskLibrary(source_path=str(root))
    files = sorted(root.glob("*.json")) if root.is_dir() else [root]
    if root.is_dir() and not files:
        logger.warning("no task files found under %s", root)
        return library

    docs: list[tuple[Path, dict]] = []
    for file in files:
        try:
            data = json.loads(file.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise FormatError(str(file), f"unreadable or invalid JSON: {exc}") from exc
        if isinstance(data, list):
            docs.extend((file, d) for d in data)
        else:
            docs.append((file, data))

    for file, doc in docs:
        task = _parse_task_doc(file, doc)
        if task.task_id in library.tasks:
            raise DuplicateTaskId(task.task_id)
        report = validate_task(task)
        if report.violations:
            if strict:
                raise FormatError(str(file), "; ".join(report.violations))
            library.annotations[task.task_id] = list(report.violations)
        library.tasks[task.task_id] = task
    return library


def load_bundled_library() -> TaskLibrary:
    return load_library(bundled_dataset_path(), strict=True)


def list_scenarios(library: TaskLibrary) -> list[dict[str, str]]:
    """Deterministic scenario listing ordered by task_id."""
    return [
        {"task_id": t.task_id, "scenario": t.scenario, "goal": t.goal}
        for t in sorted(library.tasks.values(), key=lambda t: t.task_id)
    ]
