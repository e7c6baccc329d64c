"""Oracle visibility: what the agent can currently see."""

from __future__ import annotations

from dataclasses import dataclass

from ..geometry import angle_diff_deg, bearing_deg
from .state import WorldState

FOV_DEG = 120.0
VIEW_DISTANCE_M = 8.0
NEAR_REVEAL_M = 3.0     # only_show_when_near classes appear inside this radius
NEAR_FLAG_M = 1.5       # the interaction range; sets the near flag


@dataclass(frozen=True)
class VisibleObject:
    id: str
    class_name: str
    states: dict
    near: bool

    def to_dict(self) -> dict:
        return {"id": self.id, "class": self.class_name,
                "states": dict(self.states), "near": self.near}


def visible_objects(state: WorldState) -> list[VisibleObject]:
    """Objects in the agent's room inside the 120 deg cone and 8 m range;
    only_show_when_near classes instead appear within 3 m regardless of the
    cone. The held object is always listed. Sorted by id."""
    room = state.current_room
    out: list[VisibleObject] = []
    for obj in state.scene.objects:
        if obj.id == state.holding:
            out.append(VisibleObject(obj.id, obj.class_name, dict(obj.states), True))
            continue
        if room is None or obj.room != room.id or obj.position is None:
            continue
        d = state.distance_to(obj)
        if obj.obj_class.only_show_when_near:
            if d > NEAR_REVEAL_M:
                continue
        else:
            if d > VIEW_DISTANCE_M:
                continue
            if d > 1e-9:
                bearing = bearing_deg(state.agent.position, obj.position)
                if angle_diff_deg(bearing, state.agent.yaw) > FOV_DEG / 2.0:
                    continue
        out.append(VisibleObject(obj.id, obj.class_name, dict(obj.states),
                                 d <= NEAR_FLAG_M))
    out.sort(key=lambda v: v.id)
    return out


def is_visible(state: WorldState, object_id: str) -> bool:
    return any(v.id == object_id for v in visible_objects(state))
