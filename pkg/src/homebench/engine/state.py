"""World state, action results, canonical serialization and hashing.

Canonical state serialization (used by state_hash and replay verification),
bit-exact contract:

* one JSON document, compact separators, all keys sorted, no newlines;
* objects listed under "objects" keyed by id (ids sort lexicographically);
* every coordinate and angle rendered as fixed-point with exactly three
  decimals ("%.3f", -0.0 normalized to 0.0); booleans/None as JSON literals;
* top-level keys: agent {position, yaw, pitch}, holding, highlighted,
  objects {id: {room, position, states}}, seed, step.

The digest is the SHA-256 hex of that document.
"""

from __future__ import annotations

import copy
import hashlib
import json
from dataclasses import dataclass, field

from ..errors import UnknownRoom
from ..geometry import Point, dist
from ..scene.model import ObjectInstance, SceneGraph


@dataclass
class AgentPose:
    position: Point
    yaw: float = 0.0    # compass degrees in [0, 360)
    pitch: float = 0.0  # degrees in [-60, 60]

    def copy(self) -> "AgentPose":
        return AgentPose(self.position, self.yaw, self.pitch)


@dataclass
class WorldState:
    """A scene plus agent pose, held/highlighted object and step counter.

    Single-threaded by design; independent instances may run in parallel.
    """

    scene: SceneGraph
    agent: AgentPose
    holding: str | None = None
    highlighted: str | None = None
    step: int = 0
    seed: int = 0

    @property
    def current_room(self):
        return self.scene.room_at(self.agent.position)

    def object(self, object_id: str) -> ObjectInstance | None:
        return self.scene.object(object_id)

    def distance_to(self, obj: ObjectInstance) -> float:
        if obj.id == self.holding or obj.position is None:
            return 0.0
        return dist(self.agent.position, obj.position)

    def clone(self) -> "WorldState":
        """Deep copy for lookahead/replay; the catalog and rooms are shared."""
        scene_copy = SceneGraph(
            rooms=self.scene.rooms,
            doorways=self.scene.doorways,
            objects=[ObjectInstance(id=o.id, obj_class=o.obj_class, room=o.room,
                                    position=o.position, states=dict(o.states))
                     for o in self.scene.objects],
            catalog=self.scene.catalog,
        )
        return WorldState(scene=scene_copy, agent=self.agent.copy(),
                          holding=self.holding, highlighted=self.highlighted,
                          step=self.step, seed=self.seed)


def initial_state(scene: SceneGraph, start_room: str, seed: int = 0) -> WorldState:
    """Fresh episode state: agent at the start room's entry point, facing
    the room center-ish (yaw 0), holding nothing."""
    room = scene.resolve_room(start_room)
    if room is None:
        raise UnknownRoom(start_room)
    scene_copy = SceneGraph(
        rooms=scene.rooms, doorways=scene.doorways,
        objects=[ObjectInstance(id=o.id, obj_class=o.obj_class, room=o.room,
                                position=o.position, states=dict(o.states))
                 for o in scene.objects],
        catalog=scene.catalog)
    return WorldState(scene=scene_copy,
                      agent=AgentPose(position=room.entry_point), seed=seed)


# -- action results ------------------------------------------------------

@dataclass(frozen=True)
class StateChange:
    object_id: str
    key: str
    old: object
    new: object


@dataclass
class ActionResult:
    ok: bool
    reason: str | None = None            # failure reason code
    changes: list[StateChange] = field(default_factory=list)
    pose_delta: dict = field(default_factory=dict)  # {"position"/"yaw"/"pitch": [old, new]}
    message: str = ""

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "reason": self.reason,
            "changes": [[c.object_id, c.key, c.old, c.new] for c in self.changes],
            "pose_delta": self.pose_delta,
            "message": self.message,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ActionResult":
        return cls(ok=data["ok"], reason=data.get("reason"),
                   changes=[StateChange(*c) for c in data.get("changes", [])],
                   pose_delta=dict(data.get("pose_delta", {})),
                   message=data.get("message", ""))


# -- canonical serialization ----------------------------------------------

def _num(x: float) -> str:
    return f"{round(float(x), 3) + 0.0:.3f}"


def _canon(value):
    if isinstance(value, float):
        return _num(value)
    if isinstance(value, (list, tuple)):
        return [_canon(v) for v in value]
    if isinstance(value, dict):
        return {k: _canon(v) for k, v in value.items()}
    return value


def canonical_state(state: WorldState) -> str:
    doc = {
        "agent": {
            "position": [_num(state.agent.position[0]), _num(state.agent.position[1])],
            "yaw": _num(state.agent.yaw),
            "pitch": _num(state.agent.pitch),
        },
        "holding": state.holding,
        "highlighted": state.highlighted,
        "objects": {
            o.id: {
                "room": o.room,
                "position": ([_num(o.position[0]), _num(o.position[1])]
                             if o.position is not None else None),
                "states": _canon(dict(sorted(o.states.items()))),
            }
            for o in sorted(state.scene.objects, key=lambda o: o.id)
        },
        "seed": state.seed,
        "step": state.step,
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def state_hash(state: WorldState) -> str:
    """Fixed-width digest over the canonical serialization."""
    return hashlib.sha256(canonical_state(state).encode()).hexdigest()


# -- evaluation snapshots --------------------------------------------------

@dataclass(frozen=True)
class StateView:
    """Immutable projection of a WorldState, enough to evaluate goals and
    classify failures. One view is captured per step."""

    step: int
    agent_room: str | None
    agent_position: Point
    holding: str | None
    highlighted: str | None
    objects: dict  # id -> {"class", "room", "position", "states"}

    def obj(self, object_id: str) -> dict | None:
        return self.objects.get(object_id)

    def instances_of(self, class_name: str) -> list[str]:
        return sorted(i for i, o in self.objects.items() if o["class"] == class_name)


def capture_view(state: WorldState) -> StateView:
    room = state.current_room
    return StateView(
        step=state.step,
        agent_room=room.id if room else None,
        agent_position=state.agent.position,
        holding=state.holding,
        highlighted=state.highlighted,
        objects={
            o.id: {"class": o.class_name, "room": o.room,
                   "position": o.position, "states": copy.copy(o.states)}
            for o in state.scene.objects
        },
    )
