"""Trace classifier for the three diagnostic failure modes.

Thresholds are artifact choices (the source taxonomy is qualitative):
a navigation loop is a room cycle of period <= 3 repeated >= 3 times with no
goal-group progress inside it; redundancy collapse needs >= 5 post-progress
actions aimed at already-satisfied predicates' objects.
"""

from __future__ import annotations

from ..errors import NotAFailure
from .goals import GoalSpec
from .records import EpisodeRecord

SEMANTIC_HALLUCINATION = "SemanticHallucination"
EXPLORATORY_DEADLOCK = "ExploratoryDeadlock"
CONTEXT_SATURATION_COLLAPSE = "ContextSaturationCollapse"
OTHER = "Other"

_LOOP_MAX_PERIOD = 3
_LOOP_MIN_REPEATS = 3
_REDUNDANT_MIN_ACTIONS = 5

# Classes an agent plausibly-but-wrongly gravitates to, per scenario.
SCENARIO_PLAUSIBLE_CLASSES: dict[int, tuple[str, ...]] = {
    1: ("sofa", "bed", "shelf", "dresser"),
    2: ("pillow", "book", "wine_bottle", "dresser", "shelf"),
    3: ("table_lamp", "floor_lamp", "ceiling_lamp", "tv", "speaker", "stove"),
    4: ("drawer", "wardrobe", "refrigerator", "oven"),
    5: ("sofa", "bed", "bathtub", "sink", "shower", "toilet"),
    6: ("refrigerator", "stove", "oven", "cup", "bowl", "coffee_maker", "sink"),
    7: ("table_lamp", "floor_lamp", "ceiling_lamp", "tv", "oven", "wardrobe"),
    8: ("computer", "desk", "book", "keyboard", "table_lamp", "shelf"),
    9: ("tv", "speaker", "sofa", "coffee_table", "wine_bottle", "candle"),
    10: ("dresser", "drawer", "wardrobe", "shelf", "pillow", "toilet_cover"),
}

_INTERACTIVE = ("highlight", "open", "close", "turn_on", "turn_off",
                "pick_up", "place_on", "fill", "pour", "move_to")


def _room_visits(record: EpisodeRecord) -> list[tuple[str, int]]:
    """(room, step position) whenever the observed room changes."""
    visits: list[tuple[str, int]] = []
    for pos, step in enumerate(record.steps):
        room = step.observation.get("room_id")
        if room is None:
            continue
        if not visits or visits[-1][0] != room:
            visits.append((room, pos))
    return visits


def _has_unproductive_loop(record: EpisodeRecord) -> bool:
    visits = _room_visits(record)
    seq = [room for room, _ in visits]
    progress = set(record.group_steps)
    for period in range(2, _LOOP_MAX_PERIOD + 1):
        need = period * _LOOP_MIN_REPEATS
        for start in range(0, len(seq) - need + 1):
            window = seq[start:start + need]
            if len(set(window[:period])) != period:
                continue
            if all(window[i] == window[i % period] for i in range(need)):
                span_start = visits[start][1]
                span_end = visits[start + need - 1][1]
                if not any(span_start <= p <= span_end for p in progress):
                    return True
    return False


def _id_class_map(record: EpisodeRecord) -> dict[str, str]:
    mapping: dict[str, str] = {}
    for step in record.steps:
        for entry in step.observation.get("visible", []):
            mapping[entry["id"]] = entry["class"]
    return mapping


def _redundant_post_progress_actions(record: EpisodeRecord, goal: GoalSpec) -> int:
    if not record.group_steps:
        return 0
    last_progress = max(record.group_steps)
    satisfied_classes = {
        c for group in goal.groups[:len(record.group_steps)]
        for p in group for c in p.mentioned_classes()}
    id_class = _id_class_map(record)
    count = 0
    for pos, step in enumerate(record.steps):
        if pos <= last_progress:
            continue
        target = step.action.get("target")
        if target and id_class.get(target) in satisfied_classes:
            count += 1
    return count


def _hallucinated_interaction(record: EpisodeRecord, goal: GoalSpec) -> bool:
    goal_classes = goal.distinct_classes()
    goal_rooms = set(record.meta.get("goal_rooms", []))
    final_room = None
    for step in reversed(record.steps):
        final_room = step.observation.get("room_id")
        if final_room is not None:
            break
    if final_room is None or final_room in goal_rooms:
        return False
    plausible = set(SCENARIO_PLAUSIBLE_CLASSES.get(record.meta.get("scenario", 0), ()))
    id_class = _id_class_map(record)
    for step in record.steps:
        if step.action.get("name") not in _INTERACTIVE:
            continue
        cls = id_class.get(step.action.get("target") or "")
        if cls and cls not in goal_classes and cls in plausible:
            return True
    return False


def classify_failure(record: EpisodeRecord, goal: GoalSpec) -> set[str]:
    """Diagnostic labels for a failed episode; {'Other'} when nothing fires.

    Raises NotAFailure for successful records.
    """
    if record.success:
        raise NotAFailure(record.task_id)
    labels: set[str] = set()
    if _has_unproductive_loop(record):
        labels.add(EXPLORATORY_DEADLOCK)
    if (record.group_steps
            and _redundant_post_progress_actions(record, goal) >= _REDUNDANT_MIN_ACTIONS):
        labels.add(CONTEXT_SATURATION_COLLAPSE)
    if _hallucinated_interaction(record, goal):
        labels.add(SEMANTIC_HALLUCINATION)
    return labels or {OTHER}
