"""Static and dynamic world description: rooms, doorways, objects, affordances.

A SceneGraph is immutable after construction except for ObjectInstance state
maps, which the world engine mutates during episodes. Everything else (rooms,
doorways, catalog, object identity) never changes.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum

from ..errors import UnknownRoom
from ..geometry import Point, Rect, dist, point_on_segment


class AffordanceType(str, Enum):
    """The seven-way ontology assigning each object class its legal actions."""

    DOOR_CONTAINER = "door_container"
    SWITCH = "switch"
    PICKUP = "pickup"
    SURFACE = "surface"
    FLUID_SOURCE = "fluid_source"
    CONTAINER_FLUID = "container_fluid"
    ANCHOR = "anchor"


FLUID_SOURCE_CAPABLE = "fluid_source_capable"

# State keys applicable per affordance. Objects carry exactly these keys.
AFFORDANCE_STATE_KEYS: dict[AffordanceType, tuple[str, ...]] = {
    AffordanceType.DOOR_CONTAINER: ("is_open",),
    AffordanceType.SWITCH: ("is_on",),
    AffordanceType.PICKUP: ("on_top_of",),
    AffordanceType.SURFACE: (),
    AffordanceType.FLUID_SOURCE: (),
    AffordanceType.CONTAINER_FLUID: ("is_filled", "on_top_of"),
    AffordanceType.ANCHOR: (),
}


@dataclass(frozen=True)
class ObjectClass:
    class_name: str
    affordance: AffordanceType
    capability_flags: frozenset[str] = frozenset()
    only_show_when_near: bool = False
    default_states: dict = field(default_factory=dict)
    allowed_rooms: tuple[str, ...] = ()  # base room labels (co-occurrence table)

    @property
    def portable(self) -> bool:
        return self.affordance in (AffordanceType.PICKUP, AffordanceType.CONTAINER_FLUID)

    @property
    def is_fluid_source(self) -> bool:
        return (self.affordance is AffordanceType.FLUID_SOURCE
                or FLUID_SOURCE_CAPABLE in self.capability_flags)


@dataclass
class ObjectInstance:
    id: str
    obj_class: ObjectClass
    room: str | None  # None while held by the agent
    position: Point | None  # None while held
    states: dict = field(default_factory=dict)

    @property
    def class_name(self) -> str:
        return self.obj_class.class_name

    @property
    def affordance(self) -> AffordanceType:
        return self.obj_class.affordance


@dataclass(frozen=True)
class Room:
    id: str
    label: str
    region: Rect
    entry_point: Point

    @property
    def base_label(self) -> str:
        """Label without the uniquifying ' 2'/' 3' suffix."""
        head, _, tail = self.label.rpartition(" ")
        return head if tail.isdigit() and head else self.label


@dataclass(frozen=True)
class Doorway:
    room_a: str
    room_b: str
    a: Point
    b: Point

    def joins(self, room_id: str) -> bool:
        return room_id in (self.room_a, self.room_b)

    def other(self, room_id: str) -> str:
        return self.room_b if room_id == self.room_a else self.room_a

    def midpoint(self) -> Point:
        return ((self.a[0] + self.b[0]) / 2.0, (self.a[1] + self.b[1]) / 2.0)


@dataclass
class SceneGraph:
    rooms: list[Room]
    doorways: list[Doorway]
    objects: list[ObjectInstance]
    catalog: list[ObjectClass]

    def __post_init__(self):
        self._rooms_by_id = {r.id: r for r in self.rooms}
        self._rooms_by_label = {r.label: r for r in self.rooms}
        self._objects_by_id = {o.id: o for o in self.objects}
        self._catalog_by_name = {c.class_name: c for c in self.catalog}

    # -- lookups ---------------------------------------------------------

    def room(self, room_id: str) -> Room:
        try:
            return self._rooms_by_id[room_id]
        except KeyError:
            raise UnknownRoom(room_id) from None

    def resolve_room(self, ref: str) -> Room | None:
        """Resolve a room id or label; None if neither matches."""
        return self._rooms_by_id.get(ref) or self._rooms_by_label.get(ref)

    def object(self, object_id: str) -> ObjectInstance | None:
        return self._objects_by_id.get(object_id)

    def object_class(self, class_name: str) -> ObjectClass | None:
        return self._catalog_by_name.get(class_name)

    def objects_in_room(self, room_id: str) -> list[ObjectInstance]:
        return [o for o in self.objects if o.room == room_id]

    def objects_of_class(self, class_name: str) -> list[ObjectInstance]:
        return [o for o in self.objects if o.class_name == class_name]

    def room_labels(self) -> list[str]:
        return sorted(r.label for r in self.rooms)

    # -- geometry --------------------------------------------------------

    def room_at(self, p: Point) -> Room | None:
        """Room whose region contains p; boundary ties go to the lowest id."""
        hits = [r for r in self.rooms if r.region.contains(p)]
        if not hits:
            return None
        return min(hits, key=lambda r: r.id)

    def doorways_of(self, room_id: str) -> list[Doorway]:
        return [d for d in self.doorways if d.joins(room_id)]

    def doorway_at(self, p: Point, room_id: str) -> Doorway | None:
        for d in self.doorways_of(room_id):
            if point_on_segment(p, d.a, d.b):
                return d
        return None

    def on_any_doorway(self, p: Point) -> bool:
        return any(point_on_segment(p, d.a, d.b) for d in self.doorways)

    # -- topology --------------------------------------------------------

    def adjacency(self) -> dict[str, list[str]]:
        adj: dict[str, list[str]] = {r.id: [] for r in self.rooms}
        for d in self.doorways:
            if d.room_a in adj and d.room_b in adj:
                adj[d.room_a].append(d.room_b)
                adj[d.room_b].append(d.room_a)
        return {k: sorted(set(v)) for k, v in adj.items()}


def shortest_room_path(scene: SceneGraph, start: str, goal: str) -> list[str]:
    """Minimal-hop room path through the doorway graph.

    Raises UnknownRoom if either endpoint is missing; start == goal gives
    [start]. Neighbor expansion is sorted, so ties resolve deterministically.
    """
    scene.room(start), scene.room(goal)
    if start == goal:
        return [start]
    adj = scene.adjacency()
    prev: dict[str, str] = {start: start}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for nxt in adj[cur]:
            if nxt in prev:
                continue
            prev[nxt] = cur
            if nxt == goal:
                path = [goal]
                while path[-1] != start:
                    path.append(prev[path[-1]])
                return path[::-1]
            queue.append(nxt)
    raise UnknownRoom(f"no path from {start} to {goal}")


def walk_path(scene: SceneGraph, p0: Point, p1: Point) -> bool:
    """True if the straight segment p0->p1 stays inside rooms, crossing
    room boundaries only through doorway segments.

    Rooms are convex, so a same-room segment is always clear; each boundary
    crossing must land on a doorway of the current room.
    """
    room = scene.room_at(p0)
    if room is None:
        return False
    cur = p0
    t_done = 0.0
    for _ in range(32):
        if room.region.contains(p1):
            return True
        t = room.region.exit_parameter(cur, p1)
        if t is None:
            return True
        # Advance to the exit point (global parameter bookkeeping avoids
        # re-finding the same boundary after a zero-length step).
        t_done = t_done + (1.0 - t_done) * t
        exitp = (p0[0] + (p1[0] - p0[0]) * t_done, p0[1] + (p1[1] - p0[1]) * t_done)
        door = scene.doorway_at(exitp, room.id)
        if door is None:
            return False
        room = scene.room(door.other(room.id))
        if not room.region.contains(exitp, eps=1e-4):
            return False
        cur = exitp
        t_done = min(t_done + 1e-9, 1.0)
    return False


def wall_stop_distance(scene: SceneGraph, p: Point, direction: Point,
                       room_id: str, offset: float = 0.3) -> float:
    """Free distance along direction before stopping offset short of the
    current room's boundary."""
    room = scene.room(room_id)
    far = (p[0] + direction[0] * 100.0, p[1] + direction[1] * 100.0)
    t = room.region.exit_parameter(p, far)
    if t is None:
        return 0.0
    return max(0.0, t * 100.0 - offset)


def nearest_object_distance(a: Point, obj: ObjectInstance) -> float:
    if obj.position is None:
        return 0.0
    return dist(a, obj.position)
