"""Deterministic state transition for the 21 atomic actions.

apply_action mutates the WorldState in place and returns an ActionResult.
The step counter increments on every call; a Failure leaves everything else
untouched. Precondition checks run in a fixed order (target resolution,
visibility, affordance, holding slot, range, object state, path), and the
first violation names the failure reason.
"""

from __future__ import annotations

from ..geometry import bearing_deg, dist, heading_vector
from ..scene.model import AffordanceType, ObjectInstance, walk_path, wall_stop_distance
from .actions import (Action, OBJECT_TARGET_ACTIONS, PROXIMITY_GATED,
                      INTERACTION_RANGE_M, action_legal_for, action_problems)
from .state import ActionResult, StateChange, WorldState
from .visibility import is_visible

# Failure reason codes
MALFORMED = "MalformedAction"
UNKNOWN_TARGET = "UnknownTarget"
UNKNOWN_ROOM = "UnknownRoom"
NOT_VISIBLE = "NotVisible"
AFFORDANCE_ILLEGAL = "AffordanceIllegal"
HOLDING_OCCUPIED = "HoldingOccupied"
NOTHING_HELD = "NothingHeld"
OUT_OF_RANGE = "OutOfRange"
PRECONDITION_STATE = "PreconditionState"
NO_FLUID_SOURCE = "NoFluidSource"
PATH_BLOCKED = "PathBlocked"

PITCH_MIN, PITCH_MAX = -60.0, 60.0
MOVE_TO_STANDOFF_M = 1.0
WALL_STOP_OFFSET_M = 0.3


def _fail(reason: str, message: str) -> ActionResult:
    return ActionResult(ok=False, reason=reason, message=message)


def _qualifying_fluid_source(state: WorldState) -> ObjectInstance | None:
    room = state.current_room
    if room is None:
        return None
    for obj in sorted(state.scene.objects, key=lambda o: o.id):
        if obj.room != room.id or obj.position is None:
            continue
        if not obj.obj_class.is_fluid_source:
            continue
        if obj.affordance is AffordanceType.SWITCH and not obj.states.get("is_on"):
            continue
        if state.distance_to(obj) <= INTERACTION_RANGE_M:
            return obj
    return None


def apply_action(state: WorldState, action: Action) -> ActionResult:
    result = _apply(state, action)
    state.step += 1
    return result


def _apply(state: WorldState, action: Action) -> ActionResult:
    problems = action_problems(action)
    if problems:
        return _fail(MALFORMED, "; ".join(problems))

    name = action.name
    agent = state.agent

    # -- room-targeted navigation ------------------------------------
    if name == "move_to_room":
        room = state.scene.resolve_room(action.target)
        if room is None:
            return _fail(UNKNOWN_ROOM, f"no room {action.target!r} in this apartment")
        old = agent.position
        agent.position = room.entry_point
        return ActionResult(ok=True, pose_delta={"position": [list(old), list(room.entry_point)]},
                            message=f"moved to {room.label}")

    # -- parameterless / amount navigation ----------------------------
    if name in ("turn_left", "turn_right"):
        old = agent.yaw
        delta = -action.amount if name == "turn_left" else action.amount
        agent.yaw = (agent.yaw + delta) % 360.0
        return ActionResult(ok=True, pose_delta={"yaw": [old, agent.yaw]},
                            message=f"yaw now {agent.yaw:.1f}")
    if name in ("look_up", "look_down"):
        old = agent.pitch
        delta = -action.amount if name == "look_up" else action.amount
        agent.pitch = min(max(agent.pitch + delta, PITCH_MIN), PITCH_MAX)
        return ActionResult(ok=True, pose_delta={"pitch": [old, agent.pitch]},
                            message=f"pitch now {agent.pitch:.1f}")
    if name in ("move_forward", "move_backward", "move_left", "move_right"):
        offsets = {"move_forward": 0.0, "move_right": 90.0,
                   "move_backward": 180.0, "move_left": 270.0}
        hx, hy = heading_vector((agent.yaw + offsets[name]) % 360.0)
        dest = (agent.position[0] + hx * action.amount,
                agent.position[1] + hy * action.amount)
        if not walk_path(state.scene, agent.position, dest):
            return _fail(PATH_BLOCKED, "no passable path to there")
        old = agent.position
        agent.position = dest
        return ActionResult(ok=True, pose_delta={"position": [list(old), list(dest)]},
                            message=f"moved {action.amount:.2f} m")
    if name == "move_forward_to_wall":
        room = state.current_room
        if room is None:
            return _fail(PATH_BLOCKED, "agent is not inside a room")
        free = wall_stop_distance(state.scene, agent.position,
                                  heading_vector(agent.yaw), room.id,
                                  offset=WALL_STOP_OFFSET_M)
        if free <= 1e-6:
            return _fail(PATH_BLOCKED, "already at the wall")
        hx, hy = heading_vector(agent.yaw)
        old = agent.position
        agent.position = (old[0] + hx * free, old[1] + hy * free)
        return ActionResult(ok=True,
                            pose_delta={"position": [list(old), list(agent.position)]},
                            message=f"advanced {free:.2f} m to the wall")

    # -- object-targeted actions --------------------------------------
    held_id = state.holding
    target: ObjectInstance | None = None
    if name in OBJECT_TARGET_ACTIONS:
        target = state.object(action.target)
        if target is None:
            return _fail(UNKNOWN_TARGET, f"no object {action.target!r}")
        if not is_visible(state, target.id):
            return _fail(NOT_VISIBLE, f"{target.id} is not visible")
        if not action_legal_for(name, target.affordance):
            return _fail(AFFORDANCE_ILLEGAL,
                         f"{name} cannot target affordance {target.affordance.value}")

    if name in ("drop_held", "place_on", "pour") and held_id is None:
        return _fail(NOTHING_HELD, "nothing is held")
    if name == "pick_up" and held_id is not None:
        return _fail(HOLDING_OCCUPIED, f"already holding {held_id}")

    if name in PROXIMITY_GATED and target is not None:
        if state.distance_to(target) > INTERACTION_RANGE_M:
            return _fail(OUT_OF_RANGE,
                         f"{target.id} is beyond {INTERACTION_RANGE_M} m")

    if name == "move_to":
        if target.id == held_id or target.position is None:
            return ActionResult(ok=True, message=f"already carrying {target.id}")
        d = dist(agent.position, target.position)
        old_pos, old_yaw = agent.position, agent.yaw
        if d > MOVE_TO_STANDOFF_M:
            t = MOVE_TO_STANDOFF_M / d
            new = (target.position[0] + (agent.position[0] - target.position[0]) * t,
                   target.position[1] + (agent.position[1] - target.position[1]) * t)
            room = state.scene.room(target.room)
            agent.position = room.region.clamp_inside(new)
        agent.yaw = bearing_deg(agent.position, target.position) if d > 1e-9 else agent.yaw
        delta = {}
        if agent.position != old_pos:
            delta["position"] = [list(old_pos), list(agent.position)]
        if agent.yaw != old_yaw:
            delta["yaw"] = [old_yaw, agent.yaw]
        return ActionResult(ok=True, pose_delta=delta, message=f"standing by {target.id}")

    if name == "highlight":
        old = state.highlighted
        state.highlighted = target.id
        return ActionResult(ok=True,
                            changes=[StateChange("agent", "highlighted", old, target.id)],
                            message=f"highlighted {target.id}")

    if name in ("open", "close"):
        want_open = name == "open"
        if bool(target.states.get("is_open")) == want_open:
            return _fail(PRECONDITION_STATE, f"{target.id} is already "
                                             f"{'open' if want_open else 'closed'}")
        target.states["is_open"] = want_open
        return ActionResult(ok=True,
                            changes=[StateChange(target.id, "is_open", not want_open, want_open)],
                            message=f"{name}ed {target.id}")

    if name in ("turn_on", "turn_off"):
        want_on = name == "turn_on"
        if bool(target.states.get("is_on")) == want_on:
            return _fail(PRECONDITION_STATE, f"{target.id} is already "
                                             f"{'on' if want_on else 'off'}")
        target.states["is_on"] = want_on
        return ActionResult(ok=True,
                            changes=[StateChange(target.id, "is_on", not want_on, want_on)],
                            message=f"turned {target.id} {'on' if want_on else 'off'}")

    if name == "pick_up":
        changes = [StateChange("agent", "holding", None, target.id),
                   StateChange(target.id, "room", target.room, None)]
        if target.states.get("on_top_of") is not None:
            changes.append(StateChange(target.id, "on_top_of",
                                       target.states["on_top_of"], None))
            target.states["on_top_of"] = None
        state.holding = target.id
        target.room = None
        target.position = None
        return ActionResult(ok=True, changes=changes, message=f"picked up {target.id}")

    if name == "drop_held":
        held = state.object(held_id)
        room = state.current_room
        if room is None:
            return _fail(PATH_BLOCKED, "nowhere to drop")
        held.room = room.id
        held.position = agent.position
        state.holding = None
        return ActionResult(ok=True,
                            changes=[StateChange("agent", "holding", held_id, None),
                                     StateChange(held_id, "room", None, room.id)],
                            message=f"dropped {held_id}")

    if name == "place_on":
        held = state.object(held_id)
        old_top = held.states.get("on_top_of")
        held.states["on_top_of"] = target.id
        held.room = target.room
        held.position = target.position
        state.holding = None
        return ActionResult(ok=True,
                            changes=[StateChange(held_id, "on_top_of", old_top, target.id),
                                     StateChange("agent", "holding", held_id, None),
                                     StateChange(held_id, "room", None, target.room)],
                            message=f"placed {held_id} on {target.id}")

    if name == "fill":
        source = _qualifying_fluid_source(state)
        if source is None:
            return _fail(NO_FLUID_SOURCE, "no running fluid source within reach")
        changes = []
        if not target.states.get("is_filled"):
            changes.append(StateChange(target.id, "is_filled", False, True))
            target.states["is_filled"] = True
        return ActionResult(ok=True, changes=changes,
                            message=f"filled {target.id} at {source.id}")

    if name == "pour":
        held = state.object(held_id)
        if held.affordance is not AffordanceType.CONTAINER_FLUID:
            return _fail(PRECONDITION_STATE, f"{held_id} cannot hold liquid")
        if not held.states.get("is_filled"):
            return _fail(PRECONDITION_STATE, f"{held_id} is empty")
        if target.id == held_id:
            return _fail(PRECONDITION_STATE, "cannot pour into the held container")
        changes = [StateChange(held_id, "is_filled", True, False)]
        held.states["is_filled"] = False
        if not target.states.get("is_filled"):
            changes.append(StateChange(target.id, "is_filled", False, True))
            target.states["is_filled"] = True
        return ActionResult(ok=True, changes=changes,
                            message=f"poured {held_id} into {target.id}")

    return _fail(MALFORMED, f"unhandled action {name!r}")  # pragma: no cover
