"""Service configuration loaded from a JSON file plus CLI overrides."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

from .gateway import default_prompt_root
from .pipeline import DEFAULT_CONTEXT_WINDOW
from .stack import DEFAULT_EVICTION_WINDOW
from .tasks import bundled_dataset_path


@dataclass
class ServiceConfig:
    listen_host: str = "127.0.0.1"
    listen_port: int = 8722
    backend: str = "scripted"  # "http" | "scripted"
    api_key_env: str = "STACKTALK_API_KEY"
    api_base_url: str = ""
    model: str = ""
    retry_limit: int = 3
    prompt_pack_path: str = field(default_factory=lambda: str(default_prompt_root()))
    prompt_profile: str = "full"  # "full" | "simplified"
    task_library_path: str = field(default_factory=lambda: str(bundled_dataset_path()))
    eviction_window: int = DEFAULT_EVICTION_WINDOW
    context_window: int = DEFAULT_CONTEXT_WINDOW
    max_rounds: int = 20
    session_log_dir: Optional[str] = None
    static_dir: Optional[str] = None

    def __post_init__(self) -> None:
        if self.eviction_window < 1 or self.context_window < 1:
            raise ValueError("eviction and context windows must be >= 1")
        if self.prompt_profile not in ("full", "simplified"):
            raise ValueError(f"unknown prompt profile '{self.prompt_profile}'")
        if not Path(self.prompt_pack_path).exists():
            raise ValueError(f"prompt pack path does not exist: {self.prompt_pack_path}")
        if not Path(self.task_library_path).exists():
            raise ValueError(f"task library path does not exist: {self.task_library_path}")

    @classmethod
    def load(cls, path: Union[str, Path]) -> "ServiceConfig":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(**data)
