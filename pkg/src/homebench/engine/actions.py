"""The 21-action vocabulary, its six categories, and affordance legality.

Two tables live here and are deliberately distinct:

* SUPPORTED_ACTIONS is the per-affordance ontology row: which actions an
  object of that category participates in at all (the anchor row is exactly
  move_to/highlight and nothing more).
* TARGET_AFFORDANCES answers the grounding question "may this action name
  this object as its target": move_to/highlight accept every category, the
  rest are category-specific. pick_up additionally accepts fluid containers,
  since pour requires holding one.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..scene.model import AffordanceType

_A = AffordanceType

# category -> action names (10 + 2 + 4 + 2 + 1 + 2 = 21)
ACTION_CATEGORIES: dict[str, tuple[str, ...]] = {
    "Navigation": ("move_forward", "move_backward", "move_left", "move_right",
                   "turn_left", "turn_right", "look_up", "look_down",
                   "move_to_room", "move_forward_to_wall"),
    "Grounding": ("move_to", "highlight"),
    "Interaction": ("open", "close", "turn_on", "turn_off"),
    "Manipulation": ("pick_up", "drop_held"),
    "Placement": ("place_on",),
    "Liquid": ("fill", "pour"),
}

ALL_ACTIONS: tuple[str, ...] = tuple(
    name for names in ACTION_CATEGORIES.values() for name in names)

CATEGORY_OF: dict[str, str] = {
    name: cat for cat, names in ACTION_CATEGORIES.items() for name in names}

# Parameterized navigation: amount is meters for moves, degrees for turns.
AMOUNT_ACTIONS = frozenset({"move_forward", "move_backward", "move_left",
                            "move_right", "turn_left", "turn_right",
                            "look_up", "look_down"})
OBJECT_TARGET_ACTIONS = frozenset({"move_to", "highlight", "open", "close",
                                   "turn_on", "turn_off", "pick_up",
                                   "place_on", "fill", "pour"})
ROOM_TARGET_ACTIONS = frozenset({"move_to_room"})
NO_TARGET_ACTIONS = frozenset(ALL_ACTIONS) - OBJECT_TARGET_ACTIONS - ROOM_TARGET_ACTIONS

# Success requires the target within the 1.5 m interaction range.
PROXIMITY_GATED = frozenset({"highlight", "open", "close", "turn_on",
                             "turn_off", "pick_up", "place_on", "fill", "pour"})

INTERACTION_RANGE_M = 1.5

# Affordance ontology rows: actions each category participates in.
SUPPORTED_ACTIONS: dict[AffordanceType, frozenset[str]] = {
    _A.DOOR_CONTAINER: frozenset({"open", "close"}),
    _A.SWITCH: frozenset({"turn_on", "turn_off"}),
    _A.PICKUP: frozenset({"pick_up", "drop_held", "place_on"}),
    _A.SURFACE: frozenset({"place_on"}),
    _A.FLUID_SOURCE: frozenset({"fill"}),
    _A.CONTAINER_FLUID: frozenset({"fill", "pour"}),
    _A.ANCHOR: frozenset({"move_to", "highlight"}),
}

_EVERY = frozenset(AffordanceType)
TARGET_AFFORDANCES: dict[str, frozenset[AffordanceType]] = {
    "move_to": _EVERY,
    "highlight": _EVERY,
    "open": frozenset({_A.DOOR_CONTAINER}),
    "close": frozenset({_A.DOOR_CONTAINER}),
    "turn_on": frozenset({_A.SWITCH}),
    "turn_off": frozenset({_A.SWITCH}),
    "pick_up": frozenset({_A.PICKUP, _A.CONTAINER_FLUID}),
    "place_on": frozenset({_A.SURFACE}),
    "fill": frozenset({_A.CONTAINER_FLUID}),
    "pour": frozenset({_A.CONTAINER_FLUID}),
}


def action_legal_for(action_name: str, affordance: AffordanceType) -> bool:
    """Grounding-level legality of an object-targeted action."""
    allowed = TARGET_AFFORDANCES.get(action_name)
    return allowed is not None and affordance in allowed


@dataclass(frozen=True)
class Action:
    """One atomic command. target is an object id, a room label/id, or None;
    amount is meters or degrees for parameterized navigation."""

    name: str
    target: str | None = None
    amount: float | None = None

    def to_dict(self) -> dict:
        return {"name": self.name, "target": self.target, "amount": self.amount}

    @classmethod
    def from_dict(cls, data: dict) -> "Action":
        amount = data.get("amount")
        return cls(name=data["name"], target=data.get("target"),
                   amount=float(amount) if amount is not None else None)


def action_problems(action: Action) -> list[str]:
    """Well-formedness complaints; empty list means structurally valid."""
    problems = []
    if action.name not in CATEGORY_OF:
        return [f"unknown action name {action.name!r}"]
    if action.name in AMOUNT_ACTIONS:
        if action.amount is None or action.amount <= 0:
            problems.append(f"{action.name} needs a positive amount")
        if action.target is not None:
            problems.append(f"{action.name} takes no target")
    else:
        if action.amount is not None:
            problems.append(f"{action.name} takes no amount")
    if action.name in OBJECT_TARGET_ACTIONS | ROOM_TARGET_ACTIONS:
        if not action.target:
            problems.append(f"{action.name} needs a target")
    elif action.name in NO_TARGET_ACTIONS and action.target is not None:
        problems.append(f"{action.name} takes no target")
    return problems
