import type {
  ActionKind,
  ActionPayload,
  CreateSessionResponse,
  MessageResponse,
  TopicPayload,
  TurnResultPayload,
} from "../src/types.js";

export function topic(id: number, title: string, overrides: Partial<TopicPayload> = {}): TopicPayload {
  return {
    id,
    title,
    origin: "predefined",
    category: "ask_user",
    created_round: 1,
    last_active_round: 1,
    status: "active",
    source_item_id: `q${id}`,
    ...overrides,
  };
}

export function action(kind: ActionKind, overrides: Partial<ActionPayload> = {}): ActionPayload {
  return { kind, title: null, topic_id: null, task_id: null, ...overrides };
}

export function createResponse(entries: TopicPayload[]): CreateSessionResponse {
  return {
    session_id: "s1",
    task_id: "clinical",
    greeting: "Hello! To get started, let's talk about: Basic information.",
    stack: { entries },
    stack_rendered: "",
    completion: "in_progress",
  };
}

export function turn(
  round: number,
  act: ActionPayload,
  overrides: Partial<TurnResultPayload> = {},
): TurnResultPayload {
  return {
    response: `reply ${round}`,
    decision: { action: act, raw_output: act.kind, repaired: false, fallback_used: false },
    delta: {
      action: act,
      round,
      pushed: [],
      popped: [],
      reordered: false,
      evicted: [],
      pushed_topics: [],
    },
    evicted: [],
    enriched: {
      directive: "ask_user",
      instruction: "Ask the user about the current topic.",
      source_topic_id: null,
      llm_degraded: false,
    },
    completion: "in_progress",
    round,
    report_delta: null,
    ...overrides,
  };
}

export function messageResponse(
  t: TurnResultPayload,
  entries: TopicPayload[],
  progress = { completed: 0, total: entries.length },
): MessageResponse {
  return {
    ...t,
    session_id: "s1",
    stack: { entries },
    stack_rendered: "",
    checklist_progress: progress,
  };
}

export function sixTopics(): TopicPayload[] {
  const titles = [
    "Basic information",
    "Chief complaint",
    "Duration of symptoms",
    "Severity of symptoms",
    "Medical history",
    "Lifestyle factors",
  ];
  return titles.map((title, i) => topic(i + 1, title));
}
