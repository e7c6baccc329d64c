"""Three-way grounding: room context, perception, affordance.

Checks run in that fixed order and the first violation is returned. Passing
does not guarantee apply_action success (range and state preconditions are
the engine's business); failing here guarantees apply_action would fail too.
"""

from __future__ import annotations

from dataclasses import dataclass

from .actions import OBJECT_TARGET_ACTIONS, Action, action_legal_for
from .state import WorldState
from .visibility import visible_objects

ROOM_CONTEXT_MISMATCH = "RoomContextMismatch"
PERCEPTION_MISMATCH = "PerceptionMismatch"
AFFORDANCE_MISMATCH = "AffordanceMismatch"


@dataclass(frozen=True)
class GroundingViolation:
    kind: str  # one of the three mismatch kinds above
    detail: str

    def to_dict(self) -> dict:
        return {"kind": self.kind, "detail": self.detail}


def check_grounding(state: WorldState, action: Action,
                    room_options: list[str]) -> GroundingViolation | None:
    """None when grounded; otherwise the first violation found."""
    if action.name == "move_to_room":
        if action.target not in room_options:
            return GroundingViolation(
                ROOM_CONTEXT_MISMATCH,
                f"{action.target!r} is not one of the room options")
        return None
    if action.name in OBJECT_TARGET_ACTIONS:
        seen = {v.id: v for v in visible_objects(state)}
        target = seen.get(action.target or "")
        if target is None:
            return GroundingViolation(
                PERCEPTION_MISMATCH,
                f"{action.target!r} is not in the visible object list")
        obj = state.object(target.id)
        if obj is not None and not action_legal_for(action.name, obj.affordance):
            return GroundingViolation(
                AFFORDANCE_MISMATCH,
                f"{action.name} cannot target affordance {obj.affordance.value}")
    return None
