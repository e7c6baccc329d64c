"""Planning-graph extraction: the scene reduced to rooms, objects and edges."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import InvalidScene
from ..scene.model import SceneGraph
from ..scene.validate import validate_scene


@dataclass
class ObjectNode:
    id: str
    class_name: str
    affordance: str
    room: str
    states: dict
    only_show_when_near: bool = False
    fluid_source: bool = False


@dataclass
class PlanningGraph:
    rooms: list[dict]                      # {"id", "label"}
    objects: list[ObjectNode]
    placement_edges: list[tuple[str, str]]  # (object id, room id)
    connectivity_edges: list[tuple[str, str]]

    _by_class: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        for node in self.objects:
            self._by_class.setdefault(node.class_name, []).append(node)

    def instances_of(self, class_name: str) -> list[ObjectNode]:
        return list(self._by_class.get(class_name, []))

    def in_room(self, room_id: str) -> list[ObjectNode]:
        return [o for o in self.objects if o.room == room_id]

    def room_ids(self) -> list[str]:
        return [r["id"] for r in self.rooms]

    def rooms_with_class(self, class_name: str) -> list[str]:
        return sorted({o.room for o in self.instances_of(class_name)})


def extract_scene_graph(scene: SceneGraph) -> PlanningGraph:
    """Mirror the scene as a planning graph; geometry reduces to room
    membership. Raises InvalidScene when the scene fails validation."""
    diagnostics = validate_scene(scene)
    if diagnostics:
        raise InvalidScene("; ".join(str(d) for d in diagnostics))
    objects = [
        ObjectNode(id=o.id, class_name=o.class_name,
                   affordance=o.affordance.value, room=o.room,
                   states=dict(o.states),
                   only_show_when_near=o.obj_class.only_show_when_near,
                   fluid_source=o.obj_class.is_fluid_source)
        for o in scene.objects
    ]
    return PlanningGraph(
        rooms=[{"id": r.id, "label": r.label} for r in scene.rooms],
        objects=objects,
        placement_edges=[(o.id, o.room) for o in objects],
        connectivity_edges=[(d.room_a, d.room_b) for d in scene.doorways],
    )
