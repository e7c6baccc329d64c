import { describe, expect, it } from "vitest";

import { renderMap } from "../src/map.js";
import { MapMarker, SceneSummary } from "../src/protocol.js";

const SCENE: SceneSummary = {
  rooms: [
    { id: "r0", label: "kitchen", region: [0, 0, 4, 4], entry_point: [2, 2] },
    { id: "r1", label: "bedroom", region: [4, 0, 8, 3], entry_point: [6, 1.5] },
  ],
  doorways: [{ rooms: ["r0", "r1"], segment: [[4, 1.0], [4, 1.9]] }],
  room_options: ["bedroom", "kitchen"],
  affordances: {},
};

const MARKERS: MapMarker[] = [
  { id: "cup_1", class: "cup", position: [1, 1], goal_relevant: true },
  { id: "sofa_1", class: "sofa", position: [6, 2], goal_relevant: false },
];

describe("map rendering", () => {
  it("is deterministic: identical inputs give identical command lists", () => {
    const a = renderMap(SCENE, { position: [2, 2], yaw: 90 }, MARKERS);
    const b = renderMap(SCENE, { position: [2, 2], yaw: 90 }, MARKERS);
    expect(JSON.stringify(a)).toBe(JSON.stringify(b));
  });

  it("draws rooms to scale", () => {
    const model = renderMap(SCENE, null, [], 40);
    const rects = model.commands.filter((c) => c.op === "rect") as
      Extract<typeof model.commands[number], { op: "rect" }>[];
    expect(rects).toHaveLength(2);
    const kitchen = rects.find((r) => r.label === "kitchen")!;
    const bedroom = rects.find((r) => r.label === "bedroom")!;
    expect(kitchen.w / bedroom.w).toBeCloseTo(4 / 4);
    expect(kitchen.h / bedroom.h).toBeCloseTo(4 / 3);
  });

  it("dims goal-irrelevant markers and keeps relevant ones bright", () => {
    const model = renderMap(SCENE, null, MARKERS);
    const dots = model.commands.filter((c) => c.op === "dot") as
      Extract<typeof model.commands[number], { op: "dot" }>[];
    expect(dots.find((d) => d.label === "cup_1")!.dim).toBe(false);
    expect(dots.find((d) => d.label === "sofa_1")!.dim).toBe(true);
  });

  it("places the agent arrow inside its room rectangle", () => {
    const model = renderMap(SCENE, { position: [2, 2], yaw: 0 }, [], 40);
    const arrow = model.commands.find((c) => c.op === "arrow") as
      Extract<typeof model.commands[number], { op: "arrow" }>;
    const kitchen = model.commands.find(
      (c) => c.op === "rect" && c.label === "kitchen") as
      Extract<typeof model.commands[number], { op: "rect" }>;
    expect(arrow.x).toBeGreaterThan(kitchen.x);
    expect(arrow.x).toBeLessThan(kitchen.x + kitchen.w);
    expect(arrow.y).toBeGreaterThan(kitchen.y);
    expect(arrow.y).toBeLessThan(kitchen.y + kitchen.h);
  });

  it("adds a marker on the frame where an object becomes visible", () => {
    const before = renderMap(SCENE, { position: [2, 2], yaw: 0 }, []);
    const after = renderMap(SCENE, { position: [2, 2], yaw: 0 },
                            [{ id: "cup_1", class: "cup", position: [1, 1],
                               goal_relevant: false }]);
    const dots = (m: typeof before) => m.commands.filter((c) => c.op === "dot");
    expect(dots(before)).toHaveLength(0);
    expect(dots(after)).toHaveLength(1);
  });
});
