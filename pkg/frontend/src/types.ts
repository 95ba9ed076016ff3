/** Wire types mirroring the service's JSON payloads. The UI never computes
 * stack transitions itself; it renders these payloads verbatim. */

export type ActionKind =
  | "load_topics"
  | "create_topic"
  | "finish_current"
  | "stay_current"
  | "jump_to";

export type Origin = "predefined" | "user_created";
export type TopicStatus = "active" | "finished" | "evicted";
export type Completion = "in_progress" | "report_pending" | "complete";

export interface ActionPayload {
  kind: ActionKind;
  title: string | null;
  topic_id: number | null;
  task_id: string | null;
}

export interface TopicPayload {
  id: number;
  title: string;
  origin: Origin;
  category: string;
  created_round: number;
  last_active_round: number;
  status: TopicStatus;
  source_item_id: string | null;
}

export interface StackPayload {
  entries: TopicPayload[];
  [extra: string]: unknown;
}

export interface DecisionPayload {
  action: ActionPayload;
  raw_output: string;
  repaired: boolean;
  fallback_used: boolean;
}

export interface DeltaPayload {
  action: ActionPayload;
  round: number;
  pushed: number[];
  popped: number[];
  reordered: boolean;
  evicted: number[];
  pushed_topics: TopicPayload[];
}

export interface EnrichedPayload {
  directive: "ask_user" | "answer_user" | "open_chat";
  instruction: string;
  source_topic_id: number | null;
  llm_degraded: boolean;
}

export interface TurnResultPayload {
  response: string;
  decision: DecisionPayload;
  delta: DeltaPayload;
  evicted: number[];
  enriched: EnrichedPayload;
  completion: Completion;
  round: number;
  report_delta: DeltaPayload | null;
}

export interface ChecklistProgress {
  completed: number;
  total: number;
}

export interface CreateSessionResponse {
  session_id: string;
  task_id: string;
  greeting: string;
  stack: StackPayload;
  stack_rendered: string;
  completion: Completion;
}

export interface MessageResponse extends TurnResultPayload {
  session_id: string;
  stack: StackPayload;
  stack_rendered: string;
  checklist_progress: ChecklistProgress;
}

export interface ChatMessagePayload {
  round: number;
  speaker: "user" | "system";
  text: string;
  timestamp: number;
}

export interface StateResponse {
  session_id: string;
  task_id: string;
  round: number;
  completion: Completion;
  stack: StackPayload;
  stack_rendered: string;
  history: ChatMessagePayload[];
  checklist_progress: ChecklistProgress;
  turns: TurnResultPayload[];
}

export interface TaskSummary {
  task_id: string;
  scenario: string;
  goal: string;
}
