/**
 * Headless end-to-end sessions against the real server: the console's own
 * SessionClient drives the oracle witness, mis-grounded actions surface the
 * server's verdict verbatim, and annotations round-trip.
 */

import { readFileSync, readdirSync } from "node:fs";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { Annotation, ResultPayload } from "../src/protocol.js";
import { SessionClient } from "../src/session.js";
import {
  ServerHandle, basicTask, connectSocket, readSessionTrace, startServer,
  waitFor,
} from "./helpers.js";

let server: ServerHandle;

beforeAll(async () => {
  server = await startServer();
});

afterAll(async () => {
  await server.stop();
});

describe("scripted headless session", () => {
  it("drives the oracle witness to success and the server trace matches", async () => {
    const task = basicTask();
    const witness = [...task.witness];
    const sent: typeof witness = [];
    const client = new SessionClient(connectSocket(server.url), task.task_id);

    await waitFor(client, (v) => v.connection === "ready");
    expect(client.view.scene?.rooms.length).toBeGreaterThanOrEqual(4);
    expect(client.view.task?.["task_id"]).toBe(task.task_id);

    client.onChange = (view) => {
      if (view.connection === "running" && view.observation &&
          view.observation.observation.step === sent.length + 1 &&
          witness.length > 0) {
        const action = witness.shift()!;
        sent.push(action);
        client.sendAction(action);
      }
    };
    // kick off: the first observation may already be in the view
    if (client.view.observation && witness.length > 0) {
      const action = witness.shift()!;
      sent.push(action);
      client.sendAction(action);
    }
    const done = await waitFor(client, (v) => v.connection === "done", 60_000);
    expect(done.outcome?.["status"]).toBe("success");

    // transcript mirrors what we sent, and the server's trace file agrees
    expect(done.transcript.map((t) => t.action)).toEqual(sent);
    const trace = readSessionTrace(server.outDir);
    expect(trace.outcome["status"]).toBe("success");
    expect(trace.actions).toEqual(
      sent.map((a) => ({ name: a.name, target: a.target ?? null,
                         amount: a.amount ?? null })));

    // the annotation form is mandatory before closing a finished session
    expect(client.view.annotationRequired).toBe(true);
    expect(client.close()).toBe(false);

    const note: Annotation = { executable: true, clear: true, reachable: true,
                               notes: "smooth run" };
    client.submitAnnotation(note);
    const acked = await waitFor(client, (v) => v.annotationAck !== null);
    expect(acked.annotationAck).toMatchObject(note);
    expect(client.close()).toBe(true);

    const annotationFile = readdirSync(server.outDir)
      .find((f) => f.endsWith(".annotation.json"))!;
    const saved = JSON.parse(
      readFileSync(join(server.outDir, annotationFile), "utf-8"));
    expect(saved).toMatchObject({ ...note, task_id: task.task_id });
  });

  it("shows the server grounding violation verbatim for an invalid action", async () => {
    const task = basicTask();
    const rawFrames: string[] = [];
    const client = new SessionClient(connectSocket(server.url, (raw) =>
      rawFrames.push(raw)), task.task_id);
    await waitFor(client, (v) => v.observation !== null);

    const visible = new Set(
      client.view.observation!.observation.visible.map((v) => v.id));
    expect(visible.has("unseen_thing_1")).toBe(false);
    client.sendAction({ name: "open", target: "unseen_thing_1", amount: null });
    const view = await waitFor(client, (v) => v.lastResult !== null);

    const grounding = view.lastResult!.grounding as { kind: string; detail: string };
    expect(grounding.kind).toBe("PerceptionMismatch");
    // displayed text is exactly the server's words
    const resultFrame = rawFrames
      .map((raw) => JSON.parse(raw))
      .find((frame) => frame.kind === "result")!;
    const serverGrounding = (resultFrame.payload as ResultPayload).grounding as {
      kind: string; detail: string;
    };
    expect(view.lastViolation).toBe(
      `${serverGrounding.kind}: ${serverGrounding.detail}`);
    expect(view.lastViolation).toContain("unseen_thing_1");
    client.sendAction({ name: "turn_right", target: null, amount: 30 });
    await waitFor(client, (v) =>
      v.lastResult !== null && v.lastResult.action.name === "turn_right");
    expect(client.view.lastViolation).toBeNull();
    client.close();
  });

  it("marks an interrupted session closed but keeps the partial transcript", async () => {
    const task = basicTask();
    const client = new SessionClient(connectSocket(server.url), task.task_id);
    await waitFor(client, (v) => v.observation !== null);
    client.sendAction({ name: "turn_right", target: null, amount: 45 });
    await waitFor(client, (v) => v.transcript.length === 1);
    expect(client.close()).toBe(true); // no annotation due before done
    await waitFor(client, (v) => v.connection === "closed");
    expect(client.view.transcript).toHaveLength(1);
    expect(client.view.transcript[0].action.name).toBe("turn_right");
  });
});
