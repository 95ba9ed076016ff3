/** Pure projections from service payloads to what the console renders.
 *
 * Invariants kept here:
 *  - the stack view always equals the latest service snapshot (we never
 *    compute transitions client-side; diff badges come from the turn's
 *    recorded delta);
 *  - the action timeline has exactly one entry per completed round.
 */

import type {
  ChecklistProgress,
  Completion,
  CreateSessionResponse,
  MessageResponse,
  StateResponse,
  TopicPayload,
  TurnResultPayload,
} from "./types.js";

export type StackBadge = "pushed" | "popped" | "jumped" | "evicted" | null;

export interface Bubble {
  round: number;
  speaker: "user" | "system";
  text: string;
  /** Optimistic user bubble awaiting the turn result. */
  pending: boolean;
}

export interface TopicView {
  topic: TopicPayload;
  position: number; // 0 = top of stack
  badge: StackBadge;
  isTop: boolean;
}

export interface TimelineEntry {
  round: number;
  actionKind: string;
  actionLabel: string;
  evicted: number[];
  repaired: boolean;
  fallback: boolean;
  reportPushed: boolean;
}

export interface RoundDetail {
  round: number;
  decision: TurnResultPayload["decision"];
  delta: TurnResultPayload["delta"];
  enriched: TurnResultPayload["enriched"];
  evicted: number[];
}

export interface ViewState {
  sessionId: string | null;
  taskId: string | null;
  transcript: Bubble[];
  stack: TopicView[];
  timeline: TimelineEntry[];
  turns: TurnResultPayload[];
  completion: Completion;
  progress: ChecklistProgress;
  error: string | null;
  inFlight: boolean;
}

export function initialView(): ViewState {
  return {
    sessionId: null,
    taskId: null,
    transcript: [],
    stack: [],
    timeline: [],
    turns: [],
    completion: "in_progress",
    progress: { completed: 0, total: 0 },
    error: null,
    inFlight: false,
  };
}

export function actionLabel(action: TurnResultPayload["decision"]["action"]): string {
  if (action.kind === "create_topic" && action.title) {
    return `create_topic: ${action.title}`;
  }
  if (action.kind === "jump_to" && action.topic_id !== null) {
    return `jump_to: #${action.topic_id}`;
  }
  if (action.kind === "load_topics" && action.task_id) {
    return `load_topics: ${action.task_id}`;
  }
  return action.kind;
}

function stackView(entries: TopicPayload[], turn: TurnResultPayload | null): TopicView[] {
  const pushed = new Set<number>(turn ? turn.delta.pushed : []);
  if (turn?.report_delta) {
    for (const id of turn.report_delta.pushed) pushed.add(id);
  }
  const jumped =
    turn && turn.delta.action.kind === "jump_to" ? turn.delta.action.topic_id : null;
  return entries.map((topic, position) => {
    let badge: StackBadge = null;
    if (pushed.has(topic.id)) badge = "pushed";
    else if (jumped !== null && topic.id === jumped) badge = "jumped";
    return { topic, position, badge, isTop: position === 0 };
  });
}

function timelineEntry(turn: TurnResultPayload): TimelineEntry {
  return {
    round: turn.round,
    actionKind: turn.decision.action.kind,
    actionLabel: actionLabel(turn.decision.action),
    evicted: turn.evicted,
    repaired: turn.decision.repaired,
    fallback: turn.decision.fallback_used,
    reportPushed: turn.report_delta !== null,
  };
}

export function viewFromCreate(resp: CreateSessionResponse): ViewState {
  return {
    ...initialView(),
    sessionId: resp.session_id,
    taskId: resp.task_id,
    transcript: [{ round: 0, speaker: "system", text: resp.greeting, pending: false }],
    stack: stackView(resp.stack.entries, null),
    completion: resp.completion,
    progress: { completed: 0, total: resp.stack.entries.length },
  };
}

/** Optimistic user bubble; rolled back if the turn fails. */
export function withOptimisticUser(view: ViewState, text: string): ViewState {
  const round = view.timeline.length + 1;
  return {
    ...view,
    transcript: [...view.transcript, { round, speaker: "user", text, pending: true }],
    error: null,
    inFlight: true,
  };
}

export function applyTurn(view: ViewState, resp: MessageResponse): ViewState {
  const transcript = view.transcript.map((b) =>
    b.pending ? { ...b, pending: false, round: resp.round } : b,
  );
  transcript.push({ round: resp.round, speaker: "system", text: resp.response, pending: false });
  return {
    ...view,
    transcript,
    stack: stackView(resp.stack.entries, resp),
    timeline: [...view.timeline, timelineEntry(resp)],
    turns: [...view.turns, resp],
    completion: resp.completion,
    progress: resp.checklist_progress,
    error: null,
    inFlight: false,
  };
}

export function rollbackOptimistic(view: ViewState, message: string): ViewState {
  return {
    ...view,
    transcript: view.transcript.filter((b) => !b.pending),
    error: message,
    inFlight: false,
  };
}

export function withError(view: ViewState, message: string): ViewState {
  return { ...view, error: message, inFlight: false };
}

export function dismissError(view: ViewState): ViewState {
  return { ...view, error: null };
}

/** Full rebuild from GET /state — refreshing the page reproduces the view. */
export function viewFromState(resp: StateResponse, greeting?: string): ViewState {
  const transcript: Bubble[] = resp.history.map((m) => ({
    round: m.round,
    speaker: m.speaker,
    text: m.text,
    pending: false,
  }));
  if (greeting !== undefined) {
    transcript.unshift({ round: 0, speaker: "system", text: greeting, pending: false });
  }
  const lastTurn = resp.turns.length > 0 ? resp.turns[resp.turns.length - 1] : null;
  return {
    sessionId: resp.session_id,
    taskId: resp.task_id,
    transcript,
    stack: stackView(resp.stack.entries, lastTurn),
    timeline: resp.turns.map(timelineEntry),
    turns: resp.turns,
    completion: resp.completion,
    progress: resp.checklist_progress,
    error: null,
    inFlight: false,
  };
}

/** Detail panel for one past round; null for round 0 / unknown rounds. */
export function roundDetail(view: ViewState, round: number): RoundDetail | null {
  const turn = view.turns.find((t) => t.round === round);
  if (!turn) return null;
  return {
    round,
    decision: turn.decision,
    delta: turn.delta,
    enriched: turn.enriched,
    evicted: turn.evicted,
  };
}

export function inputDisabled(view: ViewState): boolean {
  return view.sessionId === null || view.inFlight || view.completion === "complete";
}
