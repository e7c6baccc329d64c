/**
 * SessionClient drives one episode over the wire and maintains the view
 * state. Every displayed fact is copied from a received frame; the client
 * invents nothing. The server stays authoritative for grounding: local
 * palette pre-checks are advisory only.
 */

import {
  ActionBody,
  Annotation,
  Frame,
  ObservationPayload,
  ResultPayload,
  SceneSummary,
  decodeFrame,
  encodeFrame,
} from "./protocol.js";

/** Minimal WebSocket surface so tests can inject the `ws` package. */
export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: ((ev?: unknown) => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
  onclose: ((ev?: unknown) => void) | null;
  onerror: ((ev?: unknown) => void) | null;
}

export type ConnectionState =
  | "connecting"
  | "ready"
  | "running"
  | "done"
  | "closed"
  | "error";

export interface SessionView {
  connection: ConnectionState;
  taskId: string | null;
  task: Record<string, unknown> | null;
  scene: SceneSummary | null;
  observation: ObservationPayload | null;
  lastResult: ResultPayload | null;
  /** Server grounding violation text, verbatim, when the last action failed one. */
  lastViolation: string | null;
  outcome: Record<string, unknown> | null;
  groupSteps: number[];
  annotationAck: Annotation | null;
  annotationRequired: boolean;
  errorDetail: string | null;
  /** Partial trace of (action, result) pairs received so far; survives disconnects. */
  transcript: { action: ActionBody; result: ResultPayload }[];
}

export class SessionClient {
  private socket: SocketLike;
  private seq = 0;
  private lastServerSeq = 0;
  private pendingAction: ActionBody | null = null;
  readonly view: SessionView;
  onChange: (view: SessionView) => void = () => {};

  constructor(socket: SocketLike, private taskId: string) {
    this.socket = socket;
    this.view = {
      connection: "connecting",
      taskId: null,
      task: null,
      scene: null,
      observation: null,
      lastResult: null,
      lastViolation: null,
      outcome: null,
      groupSteps: [],
      annotationAck: null,
      annotationRequired: false,
      errorDetail: null,
      transcript: [],
    };
    socket.onopen = () => this.sendFrame("hello", { task_id: this.taskId });
    socket.onmessage = (ev) => this.handle(decodeFrame(String(ev.data)));
    socket.onclose = () => {
      if (this.view.connection !== "done" && this.view.connection !== "error") {
        this.view.connection = "closed"; // incomplete but resumable transcript
      }
      this.emit();
    };
    socket.onerror = () => {
      this.view.connection = "error";
      this.emit();
    };
  }

  private emit(): void {
    this.onChange(this.view);
  }

  private sendFrame(kind: string, payload: unknown): void {
    this.seq += 1;
    this.socket.send(encodeFrame(kind, this.seq, payload));
  }

  private handle(frame: Frame): void {
    if (frame.seq <= this.lastServerSeq) {
      this.view.connection = "error";
      this.view.errorDetail = `server sequence went backwards (${frame.seq})`;
      this.emit();
      return;
    }
    this.lastServerSeq = frame.seq;
    switch (frame.kind) {
      case "hello": {
        this.view.connection = "ready";
        this.view.task = frame.payload["task"] as Record<string, unknown>;
        this.view.taskId = String((this.view.task ?? {})["task_id"] ?? "");
        this.view.scene = frame.payload["scene_summary"] as SceneSummary;
        break;
      }
      case "observation": {
        this.view.connection = "running";
        this.view.observation = frame.payload as unknown as ObservationPayload;
        this.view.groupSteps = this.view.observation.group_steps;
        break;
      }
      case "result": {
        const result = frame.payload as unknown as ResultPayload;
        this.view.lastResult = result;
        this.view.lastViolation =
          result.grounding === "ok"
            ? null
            : `${result.grounding.kind}: ${result.grounding.detail}`;
        this.view.groupSteps = result.group_steps;
        if (this.pendingAction !== null) {
          this.view.transcript.push({ action: this.pendingAction, result });
          this.pendingAction = null;
        }
        break;
      }
      case "done": {
        this.view.connection = "done";
        this.view.outcome = frame.payload["outcome"] as Record<string, unknown>;
        this.view.annotationRequired = this.view.annotationAck === null;
        break;
      }
      case "annotation": {
        this.view.annotationAck = frame.payload as unknown as Annotation;
        this.view.annotationRequired = false;
        break;
      }
      case "error": {
        this.view.connection = "error";
        this.view.errorDetail = String(frame.payload["detail"] ?? "");
        break;
      }
      default:
        break;
    }
    this.emit();
  }

  /** One action per user commitment. */
  sendAction(action: ActionBody): void {
    this.pendingAction = action;
    this.sendFrame("action", action);
  }

  submitAnnotation(annotation: Annotation): void {
    this.sendFrame("annotation", annotation);
  }

  /** Closing before the annotation is filed is refused after done. */
  close(): boolean {
    if (this.view.annotationRequired) {
      return false;
    }
    this.socket.close();
    return true;
  }
}
