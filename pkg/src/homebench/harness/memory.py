"""Two-tier reference memory probe.

Long-term memory is the ground-truth room-to-object-type inventory, frozen
at episode start. Short-term memory is a fixed window of the last N=10
(action, result) pairs plus held/highlighted ids, the previous state delta
and the current room label. The probe's outputs are a Historical Summary
and a Target Room Prediction; both are recomputed every step.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..engine.actions import Action
from ..errors import UnknownClass
from ..scene.model import SceneGraph
from ..tasks.goals import GoalPredicate, GoalSpec
from ..tasks.spec import TaskSpec
from .observation import NoiseConfig, Observation, keyed_uniform

WINDOW_STEPS = 10


@dataclass(frozen=True)
class ShortTermState:
    holding: str | None = None
    holding_class: str | None = None
    highlighted: str | None = None
    window: tuple = ()          # ((step, action dict, result dict), ...)
    last_delta: tuple = ()      # state changes of the previous step
    current_room: str | None = None  # room label


@dataclass(frozen=True)
class MemoryState:
    long_term: dict           # room label -> tuple of class names
    short_term: ShortTermState = field(default_factory=ShortTermState)


@dataclass(frozen=True)
class MemoryOutputs:
    historical_summary: str
    target_room: str

    def to_dict(self) -> dict:
        return {"historical_summary": self.historical_summary,
                "target_room": self.target_room}


def init_memory(scene: SceneGraph) -> MemoryState:
    inventory: dict[str, set] = {r.label: set() for r in scene.rooms}
    for obj in scene.objects:
        if obj.room is not None:
            inventory[scene.room(obj.room).label].add(obj.class_name)
    return MemoryState(long_term={label: tuple(sorted(classes))
                                  for label, classes in inventory.items()})


def memory_update(memory: MemoryState, observation: Observation,
                  action: Action | None, noise: NoiseConfig | None = None,
                  step: int = 0) -> MemoryState:
    """The per-step memory transition: append the (action, result) pair,
    evict beyond the window, refresh transient fields. Memory noise deletes
    surviving window entries with the configured probability."""
    window = list(memory.short_term.window)
    if action is not None:
        window.append((step, action.to_dict(), observation.last_action_result))
    window = window[-WINDOW_STEPS:]
    if noise is not None and noise.memory_drop > 0.0:
        window = [entry for entry in window
                  if keyed_uniform("mem", noise.seed, step, entry[0])
                  >= noise.memory_drop]
    holding_class = None
    if observation.holding is not None:
        for v in observation.visible:
            if v["id"] == observation.holding:
                holding_class = v["class"]
                break
        if holding_class is None:
            holding_class = memory.short_term.holding_class
    last = observation.last_action_result or {}
    return MemoryState(
        long_term=memory.long_term,
        short_term=ShortTermState(
            holding=observation.holding,
            holding_class=holding_class,
            highlighted=observation.highlighted,
            window=tuple(window),
            last_delta=tuple(tuple(c) for c in last.get("changes", [])),
            current_room=observation.room_label,
        ))


def _describe_predicate(pred: GoalPredicate) -> str:
    if pred.kind == "state_equals":
        target = pred.class_name or pred.object_id
        return f"set {pred.key} of {target} to {pred.value}"
    if pred.kind == "placed_on":
        return f"place {pred.class_name} on {pred.surface_class}"
    if pred.kind == "inspected":
        return f"inspect {pred.class_name}"
    if pred.kind == "holding":
        return f"hold {pred.class_name}" if pred.class_name else "empty your hands"
    return pred.kind


def _needed_class(pred: GoalPredicate, short: ShortTermState) -> str | None:
    """The object class the agent still has to reach for this predicate."""
    if pred.kind == "placed_on":
        if short.holding is not None and short.holding_class == pred.class_name:
            return pred.surface_class
        return pred.class_name
    if pred.kind == "holding":
        if pred.class_name is None or short.holding_class == pred.class_name:
            return None
        return pred.class_name
    return pred.class_name  # state_equals by-id has none; caller handles


def summarize_memory(memory: MemoryState, task: TaskSpec,
                     group_steps: list[int]) -> MemoryOutputs:
    """Reference (rule-based) probe: summary of done/pending work plus the
    predicted next room. Ties between rooms holding the needed class break
    to the lexicographically smallest label."""
    goal: GoalSpec = task.goal
    done = len(group_steps)
    lines = [f"progress: {done}/{len(goal.groups)} goal groups done"]
    for idx in range(done):
        desc = "; ".join(_describe_predicate(p) for p in goal.groups[idx])
        lines.append(f"done[{idx + 1}]: {desc} (step {group_steps[idx]})")
    pending = goal.groups[done] if done < len(goal.groups) else None
    if pending is not None:
        lines.append("pending: " + "; ".join(_describe_predicate(p) for p in pending))
    failure = None
    for entry in reversed(memory.short_term.window):
        _, action, result = entry
        if result is not None and not result.get("ok", True):
            failure = f"{action.get('name')} {action.get('target') or ''}".strip() \
                      + f" -> {result.get('reason')}"
            break
    if failure:
        lines.append(f"last_failure: {failure}")
    if memory.short_term.window:
        _, action, result = memory.short_term.window[-1]
        verdict = "ok" if (result or {}).get("ok") else (result or {}).get("reason")
        lines.append(f"last_action: {action.get('name')} "
                     f"{action.get('target') or ''} -> {verdict}".replace("  ", " "))

    current = memory.short_term.current_room or sorted(memory.long_term)[0]
    target = current
    if pending is not None:
        needed = None
        for pred in pending:
            needed = _needed_class(pred, memory.short_term)
            if needed:
                break
        if needed:
            rooms = sorted(label for label, classes in memory.long_term.items()
                           if needed in classes)
            if not rooms:
                raise UnknownClass(f"{needed} is absent from the apartment inventory")
            target = rooms[0]
    lines.append(f"target_room: {target}")
    return MemoryOutputs(historical_summary="\n".join(lines), target_room=target)
