"""Structural scene validation. Diagnostics are data, not exceptions."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from ..geometry import EPS, point_on_segment
from .model import AFFORDANCE_STATE_KEYS, SceneGraph


@dataclass(frozen=True)
class Diagnostic:
    kind: str
    subject: str
    detail: str = ""

    def __str__(self) -> str:
        return f"{self.kind}({self.subject}){': ' + self.detail if self.detail else ''}"


def validate_scene(scene: SceneGraph) -> list[Diagnostic]:
    """Return one diagnostic per violated invariant; empty list means valid."""
    out: list[Diagnostic] = []
    room_ids = [r.id for r in scene.rooms]
    if len(set(room_ids)) != len(room_ids):
        out.append(Diagnostic("DuplicateRoomId", ",".join(sorted(room_ids))))
    if not 4 <= len(scene.rooms) <= 8:
        out.append(Diagnostic("RoomCountOutOfRange", str(len(scene.rooms))))

    for room in scene.rooms:
        if room.region.area() <= EPS:
            out.append(Diagnostic("EmptyRegion", room.id))
        if not room.region.contains(room.entry_point):
            out.append(Diagnostic("EntryOutsideRoom", room.id))
    for i, a in enumerate(scene.rooms):
        for b in scene.rooms[i + 1:]:
            if a.region.overlaps(b.region):
                out.append(Diagnostic("OverlappingRooms", f"{a.id},{b.id}"))

    known_rooms = set(room_ids)
    for d in scene.doorways:
        if d.room_a not in known_rooms or d.room_b not in known_rooms:
            out.append(Diagnostic("DoorwayUnknownRoom", f"{d.room_a},{d.room_b}"))
            continue
        ra = scene.room(d.room_a).region
        rb = scene.room(d.room_b).region
        on_both = all(ra.contains(p, eps=1e-4) and rb.contains(p, eps=1e-4)
                      for p in (d.a, d.b))
        collinear = abs(d.a[0] - d.b[0]) < 1e-6 or abs(d.a[1] - d.b[1]) < 1e-6
        if not (on_both and collinear):
            out.append(Diagnostic("DoorwayNotOnSharedBoundary", f"{d.room_a},{d.room_b}"))

    if scene.rooms:
        adj = scene.adjacency()
        seen = {scene.rooms[0].id}
        queue = deque(seen)
        while queue:
            for nxt in adj[queue.popleft()]:
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        for room in scene.rooms:
            if room.id not in seen:
                out.append(Diagnostic("ConnectivityViolation", room.id))

    obj_ids = [o.id for o in scene.objects]
    if len(set(obj_ids)) != len(obj_ids):
        dupes = sorted({i for i in obj_ids if obj_ids.count(i) > 1})
        out.append(Diagnostic("DuplicateObjectId", ",".join(dupes)))
    catalog_names = {c.class_name for c in scene.catalog}
    for obj in scene.objects:
        if obj.class_name not in catalog_names:
            out.append(Diagnostic("UnknownClass", obj.id, obj.class_name))
        expected = set(AFFORDANCE_STATE_KEYS[obj.affordance])
        if set(obj.states) != expected:
            out.append(Diagnostic(
                "StateAffordanceMismatch", obj.id,
                f"has {sorted(obj.states)}, affordance allows {sorted(expected)}"))
        if obj.room is None or obj.position is None:
            out.append(Diagnostic("MissingPlacement", obj.id))
            continue
        if obj.room not in known_rooms:
            out.append(Diagnostic("UnknownRoomRef", obj.id, obj.room))
            continue
        region = scene.room(obj.room).region
        on_door = any(point_on_segment(obj.position, d.a, d.b)
                      for d in scene.doorways_of(obj.room))
        if not (region.contains(obj.position) or on_door):
            out.append(Diagnostic("ObjectOutsideRoom", obj.id))
    return out
