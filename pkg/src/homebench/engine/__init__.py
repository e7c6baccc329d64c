from .actions import (ACTION_CATEGORIES, ALL_ACTIONS, AMOUNT_ACTIONS,
                      CATEGORY_OF, INTERACTION_RANGE_M, NO_TARGET_ACTIONS,
                      OBJECT_TARGET_ACTIONS, PROXIMITY_GATED,
                      ROOM_TARGET_ACTIONS, SUPPORTED_ACTIONS,
                      TARGET_AFFORDANCES, Action, action_legal_for,
                      action_problems)
from .grounding import (AFFORDANCE_MISMATCH, PERCEPTION_MISMATCH,
                        ROOM_CONTEXT_MISMATCH, GroundingViolation,
                        check_grounding)
from .state import (ActionResult, AgentPose, StateChange, StateView,
                    WorldState, canonical_state, capture_view, initial_state,
                    state_hash)
from .transition import apply_action
from .visibility import (FOV_DEG, NEAR_FLAG_M, NEAR_REVEAL_M, VIEW_DISTANCE_M,
                         VisibleObject, is_visible, visible_objects)

__all__ = [
    "ACTION_CATEGORIES", "AFFORDANCE_MISMATCH", "ALL_ACTIONS", "AMOUNT_ACTIONS",
    "Action", "ActionResult", "AgentPose", "CATEGORY_OF", "FOV_DEG",
    "GroundingViolation", "INTERACTION_RANGE_M", "NEAR_FLAG_M", "NEAR_REVEAL_M",
    "NO_TARGET_ACTIONS", "OBJECT_TARGET_ACTIONS", "PERCEPTION_MISMATCH",
    "PROXIMITY_GATED", "ROOM_CONTEXT_MISMATCH", "ROOM_TARGET_ACTIONS",
    "StateChange", "StateView", "SUPPORTED_ACTIONS", "TARGET_AFFORDANCES",
    "VIEW_DISTANCE_M", "VisibleObject", "WorldState", "action_legal_for",
    "action_problems", "apply_action", "canonical_state", "capture_view",
    "check_grounding", "initial_state", "is_visible", "state_hash",
    "visible_objects",
]
