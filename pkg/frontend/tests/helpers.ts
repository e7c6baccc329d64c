import { spawn, ChildProcess } from "node:child_process";
import { mkdtempSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import WebSocket from "ws";

import { SessionClient, SessionView, SocketLike } from "../src/session.js";
import { ActionBody } from "../src/protocol.js";
import { SCENES_DIR, SUITE_PATH, VERIFICATION_PATH } from "./server_fixture.js";

export interface ServerHandle {
  url: string;
  outDir: string;
  proc: ChildProcess;
  stop(): Promise<void>;
}

export async function startServer(): Promise<ServerHandle> {
  const outDir = mkdtempSync(join(tmpdir(), "teleop-sessions-"));
  const proc = spawn("homebench", [
    "serve", "--scenes", SCENES_DIR, "--suite", SUITE_PATH,
    "--port", "0", "--out", outDir,
  ]);
  const url = await new Promise<string>((resolve, reject) => {
    let buffer = "";
    const timer = setTimeout(() => reject(new Error("server did not start")), 30_000);
    proc.stdout!.on("data", (chunk) => {
      buffer += String(chunk);
      const match = buffer.match(/listening on (ws:\/\/[\w.:]+)/);
      if (match) {
        clearTimeout(timer);
        resolve(match[1]);
      }
    });
    proc.stderr!.on("data", (chunk) => process.stderr.write(chunk));
    proc.on("exit", () => reject(new Error("server exited early")));
  });
  return {
    url, outDir, proc,
    stop: () =>
      new Promise<void>((resolve) => {
        proc.removeAllListeners("exit");
        proc.on("exit", () => resolve());
        proc.kill("SIGINT");
        setTimeout(() => {
          proc.kill("SIGKILL");
          resolve();
        }, 3000).unref();
      }),
  };
}

/** Adapt the `ws` client to the browser-style surface SessionClient wants. */
export function connectSocket(url: string,
                              onRaw?: (raw: string) => void): SocketLike {
  const ws = new WebSocket(url);
  const like: SocketLike = {
    send: (data) => ws.send(data),
    close: () => ws.close(),
    onopen: null,
    onmessage: null,
    onclose: null,
    onerror: null,
  };
  ws.on("open", () => like.onopen?.());
  ws.on("message", (data) => {
    const raw = data.toString();
    onRaw?.(raw);
    like.onmessage?.({ data: raw });
  });
  ws.on("close", () => like.onclose?.());
  ws.on("error", () => like.onerror?.());
  return like;
}

export function waitFor(client: SessionClient,
                        predicate: (view: SessionView) => boolean,
                        timeoutMs = 20_000): Promise<SessionView> {
  return new Promise((resolve, reject) => {
    const prior = client.onChange;
    const timer = setTimeout(
      () => reject(new Error(`timed out; connection=${client.view.connection} ` +
                             `error=${client.view.errorDetail}`)),
      timeoutMs);
    const check = (view: SessionView) => {
      prior(view);
      if (predicate(view)) {
        clearTimeout(timer);
        client.onChange = prior;
        resolve(view);
      }
    };
    client.onChange = check;
    if (predicate(client.view)) {
      clearTimeout(timer);
      client.onChange = prior;
      resolve(client.view);
    }
  });
}

export interface FixtureTask {
  task_id: string;
  tier: string;
  cross_room: boolean;
  instruction: string;
  witness: ActionBody[];
}

export function loadFixtureTasks(): FixtureTask[] {
  const suite = JSON.parse(readFileSync(SUITE_PATH, "utf-8"));
  const witnesses = new Map<string, ActionBody[]>();
  for (const line of readFileSync(VERIFICATION_PATH, "utf-8").trim().split("\n")) {
    const entry = JSON.parse(line);
    witnesses.set(entry.task_id, entry.witness);
  }
  return suite.tasks.map((t: Record<string, unknown>) => ({
    task_id: t.task_id,
    tier: t.tier,
    cross_room: t.cross_room,
    instruction: t.instruction,
    witness: witnesses.get(t.task_id as string) ?? [],
  }));
}

export function basicTask(): FixtureTask {
  const task = loadFixtureTasks().find(
    (t) => t.tier === "Basic" && t.witness.length > 0);
  if (!task) throw new Error("fixture has no basic task");
  return task;
}

export function readSessionTrace(outDir: string): {
  actions: ActionBody[];
  outcome: Record<string, unknown>;
} {
  const { readdirSync } = require("node:fs");
  const files = readdirSync(outDir).filter((f: string) => f.endsWith(".jsonl"));
  if (files.length === 0) throw new Error("no session trace persisted");
  const lines = readFileSync(join(outDir, files[0]), "utf-8").trim().split("\n");
  const frames = lines.map((l) => JSON.parse(l));
  const steps = frames.filter((f) => f.kind === "step");
  const end = frames[frames.length - 1];
  return {
    actions: steps.map((s) => ({
      name: s.action.name, target: s.action.target, amount: s.action.amount,
    })),
    outcome: end.outcome,
  };
}
