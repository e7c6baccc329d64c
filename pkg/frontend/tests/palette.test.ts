import { describe, expect, it } from "vitest";

import { objectPalette, roomOptions, targetLegal } from "../src/palette.js";
import { ObservationPayload, SceneSummary } from "../src/protocol.js";

const SCENE: SceneSummary = {
  rooms: [
    { id: "r0", label: "kitchen", region: [0, 0, 4, 4], entry_point: [2, 2] },
    { id: "r1", label: "bedroom", region: [4, 0, 8, 4], entry_point: [6, 2] },
  ],
  doorways: [{ rooms: ["r0", "r1"], segment: [[4, 1.5], [4, 2.4]] }],
  room_options: ["bedroom", "kitchen"],
  affordances: {
    fridge: "door_container",
    lamp: "switch",
    cup: "container_fluid",
    sofa: "anchor",
    table: "surface",
  },
};

function obs(visible: ObservationPayload["observation"]["visible"],
             holding: string | null = null): ObservationPayload {
  return {
    observation: {
      step: 1, room_id: "r0", room_label: "kitchen", visible, holding,
      highlighted: null, room_options: SCENE.room_options,
      last_action_result: null, last_grounding: null,
    },
    agent: { position: [2, 2], yaw: 0, pitch: 0 },
    markers: [], group_steps: [], state_hash: "x",
  };
}

describe("palette grounding pre-checks", () => {
  it("enables object actions only for visible targets", () => {
    const palette = objectPalette(SCENE, obs([
      { id: "fridge_1", class: "fridge", states: {}, near: true },
    ]));
    const targets = new Set(palette.map((p) => p.target));
    expect(targets).toEqual(new Set(["fridge_1", null]));
  });

  it("disables affordance-illegal verbs (anchor only moves/highlights)", () => {
    const palette = objectPalette(SCENE, obs([
      { id: "sofa_1", class: "sofa", states: {}, near: true },
    ]));
    const verdict = Object.fromEntries(
      palette.filter((p) => p.target === "sofa_1")
             .map((p) => [p.action, p.enabled]));
    expect(verdict["move_to"]).toBe(true);
    expect(verdict["highlight"]).toBe(true);
    expect(verdict["open"]).toBe(false);
    expect(verdict["turn_on"]).toBe(false);
    expect(verdict["pick_up"]).toBe(false);
  });

  it("gates proximity actions on the near flag", () => {
    const palette = objectPalette(SCENE, obs([
      { id: "lamp_1", class: "lamp", states: {}, near: false },
    ]));
    const lamp = Object.fromEntries(
      palette.filter((p) => p.target === "lamp_1")
             .map((p) => [p.action, p]));
    expect(lamp["move_to"].enabled).toBe(true);
    expect(lamp["turn_on"].enabled).toBe(false);
    expect(lamp["turn_on"].reason).toMatch(/range/);
  });

  it("tracks the holding slot for pick_up / place_on / drop_held", () => {
    const empty = objectPalette(SCENE, obs([
      { id: "cup_1", class: "cup", states: {}, near: true },
      { id: "table_1", class: "table", states: {}, near: true },
    ]));
    const byKey = (entries: typeof empty, action: string, target: string | null) =>
      entries.find((p) => p.action === action && p.target === target)!;
    expect(byKey(empty, "pick_up", "cup_1").enabled).toBe(true);
    expect(byKey(empty, "place_on", "table_1").enabled).toBe(false);
    expect(byKey(empty, "drop_held", null).enabled).toBe(false);

    const held = objectPalette(SCENE, obs([
      { id: "cup_1", class: "cup", states: {}, near: true },
      { id: "table_1", class: "table", states: {}, near: true },
    ], "cup_1"));
    expect(byKey(held, "pick_up", "cup_1").enabled).toBe(false);
    expect(byKey(held, "place_on", "table_1").enabled).toBe(true);
    expect(byKey(held, "drop_held", null).enabled).toBe(true);
  });

  it("room selector lists exactly the room options", () => {
    expect(roomOptions(obs([]))).toEqual(["bedroom", "kitchen"]);
  });

  it("targetLegal covers the grounding table", () => {
    expect(targetLegal("open", "fridge", SCENE)).toBe(true);
    expect(targetLegal("open", "lamp", SCENE)).toBe(false);
    expect(targetLegal("pour", "cup", SCENE)).toBe(true);
    expect(targetLegal("move_to", "sofa", SCENE)).toBe(true);
  });
});
