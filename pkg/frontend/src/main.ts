/**
 * Browser wiring: connect form, live map, action palette, observation pane
 * and the annotation form. All state flows out of SessionClient.view.
 */

import { emptyForm, formComplete, toAnnotation } from "./annotation.js";
import { paint, renderMap } from "./map.js";
import { AMOUNT_ACTIONS, objectPalette, roomOptions } from "./palette.js";
import { SessionClient, SessionView, SocketLike } from "./session.js";

const $ = <T extends HTMLElement>(id: string): T =>
  document.getElementById(id) as T;

let client: SessionClient | null = null;
const form = emptyForm();

function connect(): void {
  const address = ($("address") as HTMLInputElement).value;
  const taskId = ($("task-id") as HTMLInputElement).value.trim();
  const socket = new WebSocket(address) as unknown as SocketLike;
  client = new SessionClient(socket, taskId);
  client.onChange = render;
}

function sendAction(name: string, target: string | null, amount: number | null): void {
  client?.sendAction({ name, target, amount });
}

function render(view: SessionView): void {
  $("connection").textContent = view.connection;
  $("task").textContent = view.task
    ? `${view.taskId}: ${String(view.task["instruction"])}`
    : "";
  $("outcome").textContent = view.outcome ? JSON.stringify(view.outcome) : "";
  $("violation").textContent = view.lastViolation ?? "";
  $("result").textContent = view.lastResult
    ? `${view.lastResult.action.name} -> ${
        view.lastResult.result.ok ? "ok" : view.lastResult.result.reason
      } ${view.lastResult.result.message}`
    : "";
  $("progress").textContent = `goal groups done: ${view.groupSteps.length}`;

  if (view.scene && view.observation) {
    const canvas = $("map") as HTMLCanvasElement;
    const model = renderMap(view.scene, view.observation.agent,
                            view.observation.markers);
    canvas.width = model.width;
    canvas.height = model.height;
    paint(canvas.getContext("2d") as CanvasRenderingContext2D, model);
    renderObservation(view);
    renderPalette(view);
  }
  ($("annotation-form") as HTMLElement).style.display =
    view.connection === "done" ? "block" : "none";
  $("annotation-ack").textContent = view.annotationAck
    ? `saved: ${JSON.stringify(view.annotationAck)}`
    : "";
}

function renderObservation(view: SessionView): void {
  const obs = view.observation!.observation;
  const lines = obs.visible.map(
    (v) =>
      `${v.id} (${v.class})${v.near ? " [near]" : ""} ${JSON.stringify(v.states)}`,
  );
  $("observation").textContent =
    `step ${obs.step} | room ${obs.room_label} | holding ${obs.holding ?? "-"}\n` +
    lines.join("\n");
}

function renderPalette(view: SessionView): void {
  const host = $("palette");
  host.textContent = "";
  for (const entry of objectPalette(view.scene!, view.observation!)) {
    const button = document.createElement("button");
    button.textContent = entry.target
      ? `${entry.action}(${entry.target})`
      : entry.action;
    button.disabled = !entry.enabled;
    button.title = entry.reason;
    button.onclick = () => sendAction(entry.action, entry.target, null);
    host.appendChild(button);
  }
  const rooms = $("rooms");
  rooms.textContent = "";
  for (const label of roomOptions(view.observation!)) {
    const button = document.createElement("button");
    button.textContent = `move_to_room(${label})`;
    button.onclick = () => sendAction("move_to_room", label, null);
    rooms.appendChild(button);
  }
  const moves = $("moves");
  moves.textContent = "";
  for (const name of AMOUNT_ACTIONS) {
    const button = document.createElement("button");
    const amount = name.startsWith("turn") || name.startsWith("look") ? 45 : 0.75;
    button.textContent = `${name}(${amount})`;
    button.onclick = () => sendAction(name, null, amount);
    moves.appendChild(button);
  }
  const wall = document.createElement("button");
  wall.textContent = "move_forward_to_wall";
  wall.onclick = () => sendAction("move_forward_to_wall", null, null);
  moves.appendChild(wall);
}

function wireAnnotation(): void {
  for (const field of ["executable", "clear", "reachable"] as const) {
    for (const value of [true, false]) {
      $(`${field}-${value}`).onclick = () => {
        form[field] = value;
        $(`${field}-state`).textContent = String(value);
      };
    }
  }
  $("submit-annotation").onclick = () => {
    form.notes = ($("notes") as HTMLTextAreaElement).value;
    if (!formComplete(form)) {
      $("annotation-ack").textContent = "all three verdicts are required";
      return;
    }
    client?.submitAnnotation(toAnnotation(form));
  };
}

const KEY_BINDINGS: Record<string, () => void> = {
  w: () => sendAction("move_forward", null, 0.75),
  s: () => sendAction("move_backward", null, 0.75),
  a: () => sendAction("turn_left", null, 45),
  d: () => sendAction("turn_right", null, 45),
  q: () => sendAction("move_left", null, 0.5),
  e: () => sendAction("move_right", null, 0.5),
  x: () => sendAction("drop_held", null, null),
};

window.addEventListener("keydown", (ev) => {
  const fn = KEY_BINDINGS[ev.key];
  if (fn && client) fn();
});

window.addEventListener("DOMContentLoaded", () => {
  $("connect").onclick = connect;
  wireAnnotation();
});
