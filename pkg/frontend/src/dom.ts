/** DOM builders: ViewState in, elements out. No service logic lives here. */

import type { RoundDetail, TimelineEntry, TopicView, ViewState } from "./state.js";
import { actionLabel } from "./state.js";
import type { TaskSummary } from "./types.js";

function el(tag: string, className: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderTaskOptions(select: HTMLSelectElement, tasks: TaskSummary[]): void {
  select.innerHTML = "";
  for (const task of tasks) {
    const option = document.createElement("option");
    option.value = task.task_id;
    option.textContent = `${task.task_id} — ${task.goal}`;
    select.appendChild(option);
  }
}

export function renderTranscript(container: HTMLElement, view: ViewState): void {
  container.innerHTML = "";
  for (const bubble of view.transcript) {
    const node = el(
      "div",
      `bubble bubble-${bubble.speaker}${bubble.pending ? " bubble-pending" : ""}`,
    );
    node.appendChild(el("span", "bubble-round", bubble.round > 0 ? `r${bubble.round}` : ""));
    node.appendChild(el("span", "bubble-text", bubble.text));
    container.appendChild(node);
  }
  container.scrollTop = container.scrollHeight;
}

function renderTopic(item: TopicView): HTMLElement {
  const node = el("li", `topic topic-${item.topic.origin}${item.isTop ? " topic-top" : ""}`);
  node.dataset.topicId = String(item.topic.id);
  node.appendChild(el("span", "topic-title", item.topic.title));
  node.appendChild(el("span", `badge badge-origin badge-${item.topic.origin}`, item.topic.origin));
  node.appendChild(el("span", "badge badge-status", item.topic.status));
  if (item.badge) {
    node.appendChild(el("span", `badge badge-diff badge-${item.badge}`, item.badge));
  }
  return node;
}

export function renderStack(list: HTMLElement, view: ViewState): void {
  list.innerHTML = "";
  if (view.stack.length === 0) {
    list.appendChild(el("li", "stack-empty", "stack is empty"));
    return;
  }
  for (const item of view.stack) list.appendChild(renderTopic(item));
}

function renderTimelineEntry(entry: TimelineEntry, onInspect: (round: number) => void): HTMLElement {
  const node = el("li", `timeline-entry action-${entry.actionKind}`);
  node.dataset.round = String(entry.round);
  node.appendChild(el("span", "timeline-round", `r${entry.round}`));
  node.appendChild(el("span", "timeline-action", entry.actionLabel));
  if (entry.fallback) node.appendChild(el("span", "badge badge-fallback", "fallback: stay_current"));
  else if (entry.repaired) node.appendChild(el("span", "badge badge-repaired", "repaired"));
  if (entry.evicted.length > 0) {
    node.appendChild(
      el("span", "badge badge-evicted", `evicted: ${entry.evicted.map((id) => `#${id}`).join(", ")}`),
    );
  }
  if (entry.reportPushed) node.appendChild(el("span", "badge badge-report", "final report queued"));
  const button = el("button", "timeline-inspect", "inspect") as HTMLButtonElement;
  button.type = "button";
  button.addEventListener("click", () => onInspect(entry.round));
  node.appendChild(button);
  return node;
}

export function renderTimeline(
  list: HTMLElement,
  view: ViewState,
  onInspect: (round: number) => void,
): void {
  list.innerHTML = "";
  for (const entry of view.timeline) list.appendChild(renderTimelineEntry(entry, onInspect));
}

export function renderRoundDetail(panel: HTMLElement, detail: RoundDetail | null): void {
  panel.innerHTML = "";
  if (detail === null) {
    panel.appendChild(el("p", "detail-empty", "No round selected — nothing has happened yet."));
    return;
  }
  panel.appendChild(el("h3", "detail-title", `Round ${detail.round}`));

  const decision = el("div", "detail-decision");
  decision.appendChild(el("div", "detail-line", `action: ${actionLabel(detail.decision.action)}`));
  decision.appendChild(el("div", "detail-line detail-raw", `manager output: ${detail.decision.raw_output}`));
  if (detail.decision.fallback_used) {
    decision.appendChild(el("span", "badge badge-fallback", "fallback: stay_current"));
  } else if (detail.decision.repaired) {
    decision.appendChild(el("span", "badge badge-repaired", "repaired"));
  }
  panel.appendChild(decision);

  const delta = el("div", "detail-delta");
  delta.appendChild(
    el(
      "div",
      "detail-line",
      `delta: pushed [${detail.delta.pushed.join(", ")}] popped [${detail.delta.popped.join(", ")}]` +
        `${detail.delta.reordered ? " reordered" : ""}`,
    ),
  );
  if (detail.evicted.length > 0) {
    delta.appendChild(el("div", "detail-line", `evicted: [${detail.evicted.join(", ")}]`));
  }
  panel.appendChild(delta);

  const enriched = el("div", "detail-enriched");
  enriched.appendChild(el("div", "detail-line", `directive: ${detail.enriched.directive}`));
  enriched.appendChild(el("div", "detail-line detail-raw", detail.enriched.instruction));
  if (detail.enriched.llm_degraded) {
    enriched.appendChild(el("span", "badge badge-degraded", "template fallback"));
  }
  panel.appendChild(enriched);
}

export function renderStatus(banner: HTMLElement, progressNode: HTMLElement, view: ViewState): void {
  banner.className = `banner banner-${view.completion}`;
  banner.textContent =
    view.completion === "complete"
      ? "Consultation complete."
      : view.completion === "report_pending"
        ? "All checklist items done — final report pending."
        : "";
  banner.hidden = view.completion === "in_progress";
  progressNode.textContent = view.progress.total
    ? `${view.progress.completed}/${view.progress.total} checklist items`
    : "";
}

export function renderError(banner: HTMLElement, view: ViewState): void {
  banner.hidden = view.error === null;
  banner.textContent = view.error ?? "";
}
