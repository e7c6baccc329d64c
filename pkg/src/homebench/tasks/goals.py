"""Machine-checkable goals: ordered groups of state predicates.

A goal is an ordered list of predicate groups. Group g is satisfied at the
first trace position (>= the previous group's position) where all of its
predicates hold simultaneously; the goal is satisfied when every group has
such a position. Class-bound predicates may be witnessed by any instance,
but one instance must witness the whole group (per mentioned class).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from ..engine.state import StateView
from ..errors import MalformedGoal
from ..geometry import dist

STATE_EQUALS = "state_equals"
PLACED_ON = "placed_on"
INSPECTED = "inspected"
HOLDING = "holding"

ALLOWED_STATE_KEYS = ("is_open", "is_on", "is_filled")
INSPECT_RANGE_M = 1.5


@dataclass(frozen=True)
class GoalPredicate:
    kind: str
    class_name: str | None = None     # by-class binding
    object_id: str | None = None      # by-id binding (state_equals only)
    key: str | None = None            # state_equals
    value: object = None              # state_equals
    surface_class: str | None = None  # placed_on

    @classmethod
    def state_equals(cls, target: str, key: str, value: bool, *, by_id: bool = False):
        if by_id:
            return cls(STATE_EQUALS, object_id=target, key=key, value=value)
        return cls(STATE_EQUALS, class_name=target, key=key, value=value)

    @classmethod
    def placed_on(cls, object_class: str, surface_class: str):
        return cls(PLACED_ON, class_name=object_class, surface_class=surface_class)

    @classmethod
    def inspected(cls, class_name: str):
        return cls(INSPECTED, class_name=class_name)

    @classmethod
    def holding(cls, class_name: str | None):
        return cls(HOLDING, class_name=class_name)

    def mentioned_classes(self) -> list[str]:
        out = []
        if self.class_name:
            out.append(self.class_name)
        if self.surface_class:
            out.append(self.surface_class)
        return out

    def state_changing(self) -> bool:
        return self.kind in (STATE_EQUALS, PLACED_ON)

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        for field_name in ("class_name", "object_id", "key", "value", "surface_class"):
            v = getattr(self, field_name)
            if v is not None or (field_name == "class_name" and self.kind == HOLDING):
                out[field_name] = v
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "GoalPredicate":
        return cls(kind=data["kind"], class_name=data.get("class_name"),
                   object_id=data.get("object_id"), key=data.get("key"),
                   value=data.get("value"), surface_class=data.get("surface_class"))


@dataclass(frozen=True)
class GoalSpec:
    groups: tuple[tuple[GoalPredicate, ...], ...]

    def validate(self) -> None:
        if not self.groups:
            raise MalformedGoal("goal has no groups")
        for group in self.groups:
            if not group:
                raise MalformedGoal("goal has an empty group")
            for pred in group:
                if pred.kind == STATE_EQUALS and pred.key not in ALLOWED_STATE_KEYS:
                    raise MalformedGoal(f"state_equals key {pred.key!r} not allowed")

    def distinct_classes(self) -> set[str]:
        return {c for group in self.groups for p in group for c in p.mentioned_classes()}

    def state_changing_count(self) -> int:
        return sum(1 for group in self.groups for p in group if p.state_changing())

    def to_dict(self) -> dict:
        return {"groups": [[p.to_dict() for p in group] for group in self.groups]}

    @classmethod
    def from_dict(cls, data: dict) -> "GoalSpec":
        return cls(groups=tuple(
            tuple(GoalPredicate.from_dict(p) for p in group)
            for group in data["groups"]))


def _predicate_holds(pred: GoalPredicate, view: StateView,
                     witness: dict[str, str]) -> bool:
    if pred.kind == STATE_EQUALS:
        oid = pred.object_id or witness[pred.class_name]
        obj = view.obj(oid)
        return obj is not None and obj["states"].get(pred.key) == pred.value
    if pred.kind == PLACED_ON:
        obj = view.obj(witness[pred.class_name])
        return obj is not None and obj["states"].get("on_top_of") == witness[pred.surface_class]
    if pred.kind == INSPECTED:
        oid = witness[pred.class_name]
        if view.highlighted != oid:
            return False
        obj = view.obj(oid)
        if obj is None:
            return False
        if view.holding == oid or obj["position"] is None:
            return True
        return dist(view.agent_position, obj["position"]) <= INSPECT_RANGE_M
    if pred.kind == HOLDING:
        if pred.class_name is None:
            return view.holding is None
        return view.holding == witness[pred.class_name]
    raise MalformedGoal(f"unknown predicate kind {pred.kind!r}")


def group_satisfied(group: tuple[GoalPredicate, ...], view: StateView) -> bool:
    """True if some consistent per-class instance assignment satisfies all
    predicates of the group in this view."""
    classes = sorted({c for p in group for c in p.mentioned_classes()})
    pools = [view.instances_of(c) for c in classes]
    if any(not pool for pool in pools):
        return False
    for combo in product(*pools) if classes else [()]:
        witness = dict(zip(classes, combo))
        if all(_predicate_holds(p, view, witness) for p in group):
            return True
    return False


def evaluate_goal(goal: GoalSpec, trace: list[StateView]) -> tuple[bool, list[int | None]]:
    """Greedy earliest satisfaction of ordered groups over a state trace.

    Returns (satisfied, group_steps) where group_steps[i] is the trace index
    at which group i first held (None if never, given the ordering).
    """
    goal.validate()
    if not trace:
        raise MalformedGoal("empty trace")
    steps: list[int | None] = []
    cursor = 0
    for group in goal.groups:
        found = None
        for idx in range(cursor, len(trace)):
            if group_satisfied(group, trace[idx]):
                found = idx
                break
        steps.append(found)
        if found is None:
            steps.extend([None] * (len(goal.groups) - len(steps)))
            return False, steps
        cursor = found
    return True, steps


class GoalTracker:
    """Incremental evaluator for live episodes: feed views in order."""

    def __init__(self, goal: GoalSpec):
        goal.validate()
        self.goal = goal
        self.group_steps: list[int] = []
        self._position = -1

    @property
    def satisfied(self) -> bool:
        return len(self.group_steps) == len(self.goal.groups)

    @property
    def pending_group(self) -> tuple[GoalPredicate, ...] | None:
        if self.satisfied:
            return None
        return self.goal.groups[len(self.group_steps)]

    def observe(self, view: StateView) -> bool:
        """Returns True if the goal became fully satisfied at this view."""
        self._position += 1
        while not self.satisfied and group_satisfied(self.pending_group, view):
            self.group_steps.append(self._position)
        return self.satisfied
