import { ApiClient, ApiError } from "./api.js";
import {
  applyTurn,
  dismissError,
  initialView,
  inputDisabled,
  roundDetail,
  rollbackOptimistic,
  viewFromCreate,
  withError,
  withOptimisticUser,
  type ViewState,
} from "./state.js";
import {
  renderError,
  renderRoundDetail,
  renderStack,
  renderStatus,
  renderTaskOptions,
  renderTimeline,
  renderTranscript,
} from "./dom.js";

export interface AppElements {
  taskSelect: HTMLSelectElement;
  startButton: HTMLButtonElement;
  transcript: HTMLElement;
  stackList: HTMLElement;
  timelineList: HTMLElement;
  detailPanel: HTMLElement;
  completionBanner: HTMLElement;
  errorBanner: HTMLElement;
  progress: HTMLElement;
  input: HTMLInputElement;
  sendButton: HTMLButtonElement;
}

function describe(err: unknown): string {
  if (err instanceof ApiError) return `service error (${err.status}): ${err.message}`;
  return err instanceof Error ? err.message : String(err);
}

/** Controller: owns the ViewState, re-renders after every transition. */
export class ConsoleApp {
  view: ViewState = initialView();
  selectedRound: number | null = null;

  constructor(
    private readonly api: ApiClient,
    private readonly els: AppElements,
  ) {
    els.startButton.addEventListener("click", () => void this.createAndJoin());
    els.sendButton.addEventListener("click", () => void this.sendCurrentInput());
    els.input.addEventListener("keydown", (event) => {
      if (event.key === "Enter") void this.sendCurrentInput();
    });
    els.errorBanner.addEventListener("click", () => {
      this.view = dismissError(this.view);
      this.render();
    });
  }

  async loadTasks(): Promise<void> {
    try {
      renderTaskOptions(this.els.taskSelect, await this.api.listTasks());
    } catch (err) {
      this.view = withError(this.view, describe(err));
      this.render();
    }
  }

  async createAndJoin(): Promise<void> {
    const taskId = this.els.taskSelect.value;
    if (!taskId) return;
    try {
      this.view = viewFromCreate(await this.api.createSession(taskId));
      this.selectedRound = null;
    } catch (err) {
      this.view = withError(this.view, describe(err));
    }
    this.render();
  }

  async sendCurrentInput(): Promise<void> {
    const text = this.els.input.value.trim();
    if (!text || inputDisabled(this.view) || this.view.sessionId === null) return;
    this.els.input.value = "";
    await this.sendMessage(text);
  }

  async sendMessage(text: string): Promise<void> {
    const sessionId = this.view.sessionId;
    if (sessionId === null) return;
    this.view = withOptimisticUser(this.view, text);
    this.render();
    try {
      this.view = applyTurn(this.view, await this.api.postMessage(sessionId, text));
    } catch (err) {
      this.view = rollbackOptimistic(this.view, describe(err));
    }
    this.render();
  }

  inspectRound(round: number): void {
    this.selectedRound = round;
    this.render();
  }

  render(): void {
    renderTranscript(this.els.transcript, this.view);
    renderStack(this.els.stackList, this.view);
    renderTimeline(this.els.timelineList, this.view, (round) => this.inspectRound(round));
    renderRoundDetail(
      this.els.detailPanel,
      this.selectedRound === null ? null : roundDetail(this.view, this.selectedRound),
    );
    renderStatus(this.els.completionBanner, this.els.progress, this.view);
    renderError(this.els.errorBanner, this.view);
    const disabled = inputDisabled(this.view);
    this.els.input.disabled = disabled;
    this.els.sendButton.disabled = disabled;
  }
}

export function collectElements(root: Document): AppElements {
  const get = <T extends HTMLElement>(id: string): T => {
    const node = root.getElementById(id);
    if (!node) throw new Error(`missing element #${id}`);
    return node as T;
  };
  return {
    taskSelect: get<HTMLSelectElement>("task-select"),
    startButton: get<HTMLButtonElement>("start-button"),
    transcript: get<HTMLElement>("transcript"),
    stackList: get<HTMLElement>("stack-list"),
    timelineList: get<HTMLElement>("timeline-list"),
    detailPanel: get<HTMLElement>("round-detail"),
    completionBanner: get<HTMLElement>("completion-banner"),
    errorBanner: get<HTMLElement>("error-banner"),
    progress: get<HTMLElement>("progress"),
    input: get<HTMLInputElement>("message-input"),
    sendButton: get<HTMLButtonElement>("send-button"),
  };
}
