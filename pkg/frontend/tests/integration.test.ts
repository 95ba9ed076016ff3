/** Round-trip against a live service running the scripted backend fixture:
 * create a session, send three messages (one triggering create_topic), and
 * check that transcript, stack badges, and timeline match the TurnResults. */

import { spawn, type ChildProcess } from "node:child_process";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import {
  applyTurn,
  roundDetail,
  viewFromCreate,
  viewFromState,
  withOptimisticUser,
  type ViewState,
} from "../src/state.js";

const HERE = dirname(fileURLToPath(import.meta.url));
const FIXTURE = join(HERE, "fixtures", "serve_scripted.py");
const PORT = 8799;
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;
const api = new ApiClient(BASE);

async function waitForService(): Promise<void> {
  const deadline = Date.now() + 20000;
  let lastError: unknown = null;
  while (Date.now() < deadline) {
    try {
      await api.listTasks();
      return;
    } catch (err) {
      lastError = err;
      await new Promise((resolve) => setTimeout(resolve, 250));
    }
  }
  throw new Error(`service never came up: ${String(lastError)}`);
}

beforeAll(async () => {
  server = spawn("python3", [FIXTURE, "--port", String(PORT)], {
    stdio: ["ignore", "inherit", "inherit"],
  });
  await waitForService();
});

afterAll(() => {
  server.kill("SIGTERM");
});

describe("console round-trip against the live service", () => {
  let view: ViewState;

  it("lists the 20 bundled scenarios", async () => {
    const tasks = await api.listTasks();
    expect(tasks).toHaveLength(20);
    expect(tasks.map((t) => t.task_id)).toContain("clinical");
  });

  it("creates a clinical session with six topics, item 1 on top", async () => {
    view = viewFromCreate(await api.createSession("clinical"));
    expect(view.stack).toHaveLength(6);
    expect(view.stack[0].isTop).toBe(true);
    expect(view.stack.every((t) => t.topic.origin === "predefined")).toBe(true);
    expect(view.transcript[0].text).toContain(view.stack[0].topic.title);
  });

  it("round 1: stay_current", async () => {
    view = withOptimisticUser(view, "I have had a headache for two days.");
    view = applyTurn(view, await api.postMessage(view.sessionId!, "I have had a headache for two days."));
    expect(view.timeline).toHaveLength(1);
    expect(view.timeline[0].actionKind).toBe("stay_current");
    expect(view.stack).toHaveLength(6);
  });

  it("round 2: a digression triggers create_topic and a pushed badge", async () => {
    const text = "By the way, what about travel vaccines?";
    view = withOptimisticUser(view, text);
    view = applyTurn(view, await api.postMessage(view.sessionId!, text));
    expect(view.timeline[1].actionKind).toBe("create_topic");
    expect(view.stack).toHaveLength(7);
    expect(view.stack[0].topic.title).toBe("Travel vaccines");
    expect(view.stack[0].topic.origin).toBe("user_created");
    expect(view.stack[0].badge).toBe("pushed");
    expect(view.transcript.at(-1)?.text).toContain("Vaccines are a good idea");
  });

  it("round 3: finishing the digression returns to the checklist", async () => {
    const text = "Great, that's all on that topic.";
    view = withOptimisticUser(view, text);
    view = applyTurn(view, await api.postMessage(view.sessionId!, text));
    expect(view.timeline[2].actionKind).toBe("finish_current");
    expect(view.stack).toHaveLength(6);
    expect(view.stack[0].topic.origin).toBe("predefined");
    expect(view.completion).toBe("in_progress");
  });

  it("the timeline matches the service's TurnResults one-to-one", async () => {
    const state = await api.getState(view.sessionId!);
    expect(state.turns).toHaveLength(3);
    expect(view.timeline.map((e) => e.actionKind)).toEqual(
      state.turns.map((t) => t.decision.action.kind),
    );
    expect(view.transcript.filter((b) => b.round > 0)).toHaveLength(state.history.length);
  });

  it("inspect_round shows the digression round's delta and directive", () => {
    const detail = roundDetail(view, 2);
    expect(detail).not.toBeNull();
    expect(detail!.decision.action.kind).toBe("create_topic");
    expect(detail!.delta.pushed).toHaveLength(1);
    expect(detail!.enriched.instruction.length).toBeGreaterThan(0);
  });

  it("refreshing (rebuild from GET /state) reproduces the live view", async () => {
    const rebuilt = viewFromState(await api.getState(view.sessionId!), view.transcript[0].text);
    expect(rebuilt.stack).toEqual(view.stack);
    expect(rebuilt.timeline).toEqual(view.timeline);
    expect(rebuilt.transcript.map((b) => [b.speaker, b.text])).toEqual(
      view.transcript.map((b) => [b.speaker, b.text]),
    );
  });

  it("unknown task yields an error without creating a session", async () => {
    await expect(api.createSession("spa")).rejects.toMatchObject({ status: 404 });
  });
});
