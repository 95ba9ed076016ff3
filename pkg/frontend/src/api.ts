import type {
  CreateSessionResponse,
  MessageResponse,
  StateResponse,
  TaskSummary,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    detail: string,
  ) {
    super(detail);
    this.name = "ApiError";
  }
}

async function parse<T>(resp: Response): Promise<T> {
  if (!resp.ok) {
    let detail = `HTTP ${resp.status}`;
    try {
      const body = (await resp.json()) as { detail?: string };
      if (body.detail) detail = body.detail;
    } catch {
      /* non-JSON error body; keep the status line */
    }
    throw new ApiError(resp.status, detail);
  }
  return (await resp.json()) as T;
}

/** Thin typed client over the four service endpoints. */
export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  listTasks(): Promise<TaskSummary[]> {
    return this.request<TaskSummary[]>("GET", "/tasks");
  }

  createSession(taskId: string): Promise<CreateSessionResponse> {
    return this.request<CreateSessionResponse>("POST", "/sessions", { task_id: taskId });
  }

  postMessage(sessionId: string, text: string): Promise<MessageResponse> {
    return this.request<MessageResponse>(
      "POST",
      `/sessions/${encodeURIComponent(sessionId)}/messages`,
      { text },
    );
  }

  getState(sessionId: string): Promise<StateResponse> {
    return this.request<StateResponse>(
      "GET",
      `/sessions/${encodeURIComponent(sessionId)}/state`,
    );
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: { "content-type": "application/json" } };
    if (body !== undefined) init.body = JSON.stringify(body);
    const resp = await this.fetchImpl(this.baseUrl + path, init);
    return parse<T>(resp);
  }
}
