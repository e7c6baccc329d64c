/**
 * Top-down map: a pure function from (scene summary, pose, markers) to a
 * deterministic list of draw commands. The canvas layer just executes the
 * list, so component tests can snapshot-compare renders without pixels.
 */

import { MapMarker, SceneSummary } from "./protocol.js";

export type DrawCommand =
  | { op: "rect"; x: number; y: number; w: number; h: number; stroke: string; label: string }
  | { op: "segment"; x1: number; y1: number; x2: number; y2: number; color: string; width: number }
  | { op: "dot"; x: number; y: number; r: number; color: string; dim: boolean; label: string }
  | { op: "arrow"; x: number; y: number; yaw: number; color: string };

export interface MapModel {
  width: number;
  height: number;
  commands: DrawCommand[];
}

const PAD = 12;

export function renderMap(
  scene: SceneSummary,
  agent: { position: [number, number]; yaw: number } | null,
  markers: MapMarker[],
  pixelsPerMeter = 40,
): MapModel {
  const xs = scene.rooms.flatMap((r) => [r.region[0], r.region[2]]);
  const ys = scene.rooms.flatMap((r) => [r.region[1], r.region[3]]);
  const minX = Math.min(...xs);
  const maxY = Math.max(...ys);
  const toPx = (p: [number, number]): [number, number] => [
    PAD + (p[0] - minX) * pixelsPerMeter,
    PAD + (maxY - p[1]) * pixelsPerMeter, // +y is up on the floor plan
  ];

  const commands: DrawCommand[] = [];
  for (const room of scene.rooms) {
    const [x0, y0] = toPx([room.region[0], room.region[3]]);
    const w = (room.region[2] - room.region[0]) * pixelsPerMeter;
    const h = (room.region[3] - room.region[1]) * pixelsPerMeter;
    commands.push({ op: "rect", x: x0, y: y0, w, h, stroke: "#445", label: room.label });
  }
  for (const doorway of scene.doorways) {
    const [x1, y1] = toPx(doorway.segment[0] as [number, number]);
    const [x2, y2] = toPx(doorway.segment[1] as [number, number]);
    commands.push({ op: "segment", x1, y1, x2, y2, color: "#c96", width: 4 });
  }
  const sorted = [...markers].sort((a, b) => (a.id < b.id ? -1 : 1));
  for (const marker of sorted) {
    if (marker.position === null) continue;
    const [x, y] = toPx(marker.position);
    commands.push({
      op: "dot", x, y, r: 4,
      color: marker.goal_relevant ? "#2a7" : "#99a",
      dim: !marker.goal_relevant, // goal-irrelevant objects are dimmed
      label: marker.id,
    });
  }
  if (agent !== null) {
    const [x, y] = toPx(agent.position);
    commands.push({ op: "arrow", x, y, yaw: agent.yaw, color: "#d33" });
  }
  return {
    width: Math.ceil(PAD * 2 + (Math.max(...xs) - minX) * pixelsPerMeter),
    height: Math.ceil(PAD * 2 + (maxY - Math.min(...ys)) * pixelsPerMeter),
    commands,
  };
}

/** Execute a draw-command list on a 2D canvas context. */
export function paint(ctx: CanvasRenderingContext2D, model: MapModel): void {
  ctx.clearRect(0, 0, model.width, model.height);
  ctx.font = "10px sans-serif";
  for (const cmd of model.commands) {
    switch (cmd.op) {
      case "rect":
        ctx.strokeStyle = cmd.stroke;
        ctx.strokeRect(cmd.x, cmd.y, cmd.w, cmd.h);
        ctx.fillStyle = "#667";
        ctx.fillText(cmd.label, cmd.x + 4, cmd.y + 12);
        break;
      case "segment":
        ctx.strokeStyle = cmd.color;
        ctx.lineWidth = cmd.width;
        ctx.beginPath();
        ctx.moveTo(cmd.x1, cmd.y1);
        ctx.lineTo(cmd.x2, cmd.y2);
        ctx.stroke();
        ctx.lineWidth = 1;
        break;
      case "dot":
        ctx.globalAlpha = cmd.dim ? 0.45 : 1.0;
        ctx.fillStyle = cmd.color;
        ctx.beginPath();
        ctx.arc(cmd.x, cmd.y, cmd.r, 0, Math.PI * 2);
        ctx.fill();
        ctx.globalAlpha = 1.0;
        break;
      case "arrow": {
        const rad = ((cmd.yaw - 90) * Math.PI) / 180; // yaw 0 faces +y (up)
        ctx.strokeStyle = cmd.color;
        ctx.fillStyle = cmd.color;
        ctx.beginPath();
        ctx.arc(cmd.x, cmd.y, 5, 0, Math.PI * 2);
        ctx.fill();
        ctx.beginPath();
        ctx.moveTo(cmd.x, cmd.y);
        ctx.lineTo(cmd.x + 14 * Math.cos(rad), cmd.y + 14 * Math.sin(rad));
        ctx.stroke();
        break;
      }
    }
  }
}
