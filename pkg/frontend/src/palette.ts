/**
 * Action palette model: local grounding pre-checks decide which buttons
 * light up. Advisory only; the server remains the authority.
 */

import { ObservationPayload, SceneSummary } from "./protocol.js";

export const OBJECT_ACTIONS = [
  "move_to",
  "highlight",
  "open",
  "close",
  "turn_on",
  "turn_off",
  "pick_up",
  "place_on",
  "fill",
  "pour",
] as const;

export const AMOUNT_ACTIONS = [
  "move_forward",
  "move_backward",
  "move_left",
  "move_right",
  "turn_left",
  "turn_right",
  "look_up",
  "look_down",
] as const;

export const BARE_ACTIONS = ["drop_held", "move_forward_to_wall"] as const;

const TARGET_AFFORDANCES: Record<string, string[] | "any"> = {
  move_to: "any",
  highlight: "any",
  open: ["door_container"],
  close: ["door_container"],
  turn_on: ["switch"],
  turn_off: ["switch"],
  pick_up: ["pickup", "container_fluid"],
  place_on: ["surface"],
  fill: ["container_fluid"],
  pour: ["container_fluid"],
};

const PROXIMITY_GATED = new Set([
  "highlight", "open", "close", "turn_on", "turn_off", "pick_up",
  "place_on", "fill", "pour",
]);

export interface PaletteEntry {
  action: string;
  target: string | null;
  enabled: boolean;
  reason: string;
}

export function targetLegal(
  action: string,
  className: string,
  scene: SceneSummary,
): boolean {
  const allowed = TARGET_AFFORDANCES[action];
  if (allowed === undefined) return false;
  if (allowed === "any") return true;
  const affordance = scene.affordances[className];
  return affordance !== undefined && allowed.includes(affordance);
}

/** Per-(action, visible target) palette with enable/disable verdicts. */
export function objectPalette(
  scene: SceneSummary,
  observation: ObservationPayload,
): PaletteEntry[] {
  const out: PaletteEntry[] = [];
  for (const action of OBJECT_ACTIONS) {
    for (const entry of observation.observation.visible) {
      let enabled = true;
      let reason = "";
      if (!targetLegal(action, entry.class, scene)) {
        enabled = false;
        reason = `affordance ${scene.affordances[entry.class] ?? "?"} does not support ${action}`;
      } else if (PROXIMITY_GATED.has(action) && !entry.near) {
        enabled = false;
        reason = "target is not within interaction range";
      } else if (action === "pick_up" && observation.observation.holding !== null) {
        enabled = false;
        reason = "hands are full";
      } else if (
        (action === "place_on" || action === "pour") &&
        observation.observation.holding === null
      ) {
        enabled = false;
        reason = "nothing is held";
      }
      out.push({ action, target: entry.id, enabled, reason });
    }
  }
  out.push({
    action: "drop_held",
    target: null,
    enabled: observation.observation.holding !== null,
    reason: observation.observation.holding === null ? "nothing is held" : "",
  });
  return out;
}

/** The room selector lists exactly the room options, in order. */
export function roomOptions(observation: ObservationPayload): string[] {
  return [...observation.observation.room_options];
}
