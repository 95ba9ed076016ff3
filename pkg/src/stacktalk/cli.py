"""Command-line surface: `serve`, `repl`, and `eval` subcommands."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional

from .config import ServiceConfig
from .errors import StacktalkError
from .evaluation import (
    ComparisonOutcome,
    Transcript,
    compute_metrics,
    judge_compare,
    judge_grade,
    run_episode,
    BaselineSystem,
    EngineSystem,
)
from .gateway import PromptPack
from .pipeline import DialogueEngine, EngineConfig
from .service import build_backend, build_service
from .tasks import load_library

logger = logging.getLogger(__name__)


def _load_config(args: argparse.Namespace) -> ServiceConfig:
    config = ServiceConfig.load(args.config) if args.config else ServiceConfig()
    if getattr(args, "backend", None):
        config.backend = args.backend
    if getattr(args, "profile", None):
        config.prompt_profile = args.profile
    if getattr(args, "tasks", None):
        config.task_library_path = args.tasks
    if getattr(args, "max_rounds", None):
        config.max_rounds = args.max_rounds
    return config


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    config = _load_config(args)
    from .service import create_app

    app = create_app(config)
    uvicorn.run(app, host=config.listen_host, port=config.listen_port)
    return 0


def cmd_repl(args: argparse.Namespace) -> int:
    config = _load_config(args)
    service = build_service(config)
    tasks = service.handle_list_tasks()
    print(f"{len(tasks)} tasks available. Commands: /tasks /state /quit")
    task_id = args.task or (tasks[0]["task_id"] if tasks else None)
    if task_id is None:
        print("no tasks in library", file=sys.stderr)
        return 1
    created = service.handle_create_session(task_id)
    session_id = created["session_id"]
    print(f"[{task_id}] {created['greeting']}")
    if args.show_stack:
        print(created["stack_rendered"])

    while True:
        try:
            line = input("> ").strip()
        except EOFError:
            return 0
        if not line:
            continue
        if line == "/quit":
            return 0
        if line == "/tasks":
            for t in tasks:
                print(f"{t['task_id']}: {t['goal']}")
            continue
        if line == "/state":
            state = service.handle_get_state(session_id)
            print(state["stack_rendered"])
            progress = state["checklist_progress"]
            print(f"completion={state['completion']} "
                  f"({progress['completed']}/{progress['total']})")
            continue
        try:
            result = service.handle_post_message(session_id, line)
        except StacktalkError as exc:
            print(f"error: {exc}", file=sys.stderr)
            continue
        print(result["response"])
        if args.show_stack:
            print(f"action: {result['decision']['action']['kind']}")
            print(result["stack_rendered"])
    return 0


def _load_transcript_dir(path: Path) -> dict[str, Transcript]:
    transcripts = {}
    for file in sorted(path.glob("*.json")):
        t = Transcript.from_dict(json.loads(file.read_text(encoding="utf-8")))
        transcripts[t.task_id] = t
    return transcripts


def cmd_eval(args: argparse.Namespace) -> int:
    try:
        return _run_eval(args)
    except (StacktalkError, OSError) as exc:
        print(f"eval failed: {exc}", file=sys.stderr)
        return 1


def _run_eval(args: argparse.Namespace) -> int:
    config = _load_config(args)
    backend = build_backend(config)
    pack = PromptPack.load(config.prompt_pack_path, config.prompt_profile)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    outcomes: list[ComparisonOutcome] = []
    library = load_library(config.task_library_path, strict=True)

    if args.compare:
        dir_a, dir_b = (Path(p) for p in args.compare)
        set_a = _load_transcript_dir(dir_a)
        set_b = _load_transcript_dir(dir_b)
        shared = sorted(set(set_a) & set(set_b))
        if not shared:
            print("no shared task_ids between transcript dirs", file=sys.stderr)
            return 1
        for task_id in shared:
            scenario = library.get(task_id)
            outcomes.append(
                judge_compare(set_a[task_id], set_b[task_id], scenario, backend, pack)
            )
        report = compute_metrics([], outcomes=outcomes)
        (out_dir / "metrics.json").write_text(
            json.dumps(report.to_dict(), indent=2) + "\n", encoding="utf-8"
        )
        print(report.render_table())
        return 0

    engine = DialogueEngine(
        backend,
        pack,
        EngineConfig(
            eviction_window=config.eviction_window,
            context_window=config.context_window,
        ),
    )
    transcripts: list[Transcript] = []
    verdicts = []
    had_error = False
    for task_id in sorted(library.tasks):
        scenario = library.get(task_id)
        if args.system == "engine":
            system = EngineSystem(engine, scenario)
        else:
            system = BaselineSystem(backend, scenario)
        transcript = run_episode(system, scenario, backend, pack, max_rounds=config.max_rounds)
        transcripts.append(transcript)
        (out_dir / f"{task_id}.json").write_text(
            json.dumps(transcript.to_dict(), indent=2) + "\n", encoding="utf-8"
        )
        if transcript.error:
            had_error = True
        if transcript.messages and args.judge:
            verdicts.append(judge_grade(transcript, scenario, backend, pack))

    report = compute_metrics(transcripts, verdicts=verdicts or None)
    (out_dir / "metrics.json").write_text(
        json.dumps(report.to_dict(), indent=2) + "\n", encoding="utf-8"
    )
    print(report.render_table())
    return 1 if had_error else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stacktalk")
    parser.add_argument("--config", help="path to a service config JSON file")
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--backend", choices=["http", "scripted"])
    serve.add_argument("--profile", choices=["full", "simplified"])
    serve.set_defaults(func=cmd_serve)

    repl = sub.add_parser("repl", help="interactive terminal session")
    repl.add_argument("--task", help="task_id to start with")
    repl.add_argument("--backend", choices=["http", "scripted"])
    repl.add_argument("--profile", choices=["full", "simplified"])
    repl.add_argument("--show-stack", action="store_true")
    repl.set_defaults(func=cmd_repl)

    ev = sub.add_parser("eval", help="run the evaluation protocol")
    ev.add_argument("--tasks", help="task library directory")
    ev.add_argument("--system", choices=["engine", "baseline"], default="engine")
    ev.add_argument("--max-rounds", type=int, dest="max_rounds")
    ev.add_argument("--judge", choices=["http", "scripted"],
                    help="grade transcripts with this judge backend")
    ev.add_argument("--compare", nargs=2, metavar=("DIR_A", "DIR_B"),
                    help="pairwise-compare two transcript directories")
    ev.add_argument("--backend", choices=["http", "scripted"])
    ev.add_argument("--profile", choices=["full", "simplified"])
    ev.add_argument("--out", default="eval_out", help="output directory")
    ev.set_defaults(func=cmd_eval)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
