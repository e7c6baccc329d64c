"""Tier-conditioned task templates and the scenario phrase bank.

Basic templates name every bound class verbatim; Reasoning entries are vague
utterances whose ground-truth goals live here (all objects bound inside one
room); Long-horizon templates bind 3+ distinct classes with 2+ state-changing
predicates. An external text generator can replace the instruction wording
without touching goal construction.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from typing import Callable

from ..engine.state import StateView
from ..errors import ExhaustedBindings
from ..tasks.goals import GoalPredicate, GoalSpec, group_satisfied
from ..tasks.spec import DEFAULT_BUDGET, SCENARIOS, TaskSpec, Tier
from .graph import ObjectNode, PlanningGraph

LAMP_CLASSES = ("table_lamp", "floor_lamp", "ceiling_lamp")
PORTABLE_SMALL = ("pillow", "book", "keyboard", "mouse", "remote_control",
                  "wine_bottle", "candle", "white_queen", "toothbrush", "apple")
SURFACE_CLASSES = ("dining_table", "coffee_table", "desk", "dresser",
                   "counter", "shelf", "end_table", "nightstand")
DOOR_CLASSES = ("refrigerator", "oven", "drawer", "wardrobe", "toilet_cover",
                "apartment_door")
SWITCH_CLASSES = ("table_lamp", "floor_lamp", "ceiling_lamp", "tv", "speaker",
                  "computer", "stove", "coffee_maker", "faucet", "shower")
ANY_CLASSES = ()  # empty tuple means "any class present in the scene"


@dataclass(frozen=True)
class SlotSpec:
    name: str
    classes: tuple[str, ...]          # candidate classes; () = any
    require: tuple[str, object] | None = None  # initial-state filter


@dataclass(frozen=True)
class Variant:
    id: str
    text: str
    slots: tuple[SlotSpec, ...]
    # predicate spec: (kind, slot, key, value, surface_slot)
    groups: tuple[tuple[tuple, ...], ...]
    keywords: tuple[str, ...] = ()    # Reasoning only: utterance cues


@dataclass
class TaskCandidate:
    task: TaskSpec
    template_id: str
    bound_objects: list[str]
    seed: int
    meta: dict = field(default_factory=dict)


def _se(slot: str, key: str, value: bool) -> tuple:
    return ("state_equals", slot, key, value, None)


def _placed(slot: str, surface_slot: str) -> tuple:
    return ("placed_on", slot, None, None, surface_slot)


def _insp(slot: str) -> tuple:
    return ("inspected", slot, None, None, None)


def _hold(slot: str) -> tuple:
    return ("holding", slot, None, None, None)


VARIANTS: dict[int, tuple[Variant, ...]] = {
    1: (
        Variant("B1-a", "Navigate to the {a} first, then go inspect the {b}.",
                (SlotSpec("a", ANY_CLASSES), SlotSpec("b", ANY_CLASSES)),
                ((_insp("a"),), (_insp("b"),))),
        Variant("B1-b", "Walk over to the {a} to observe it, then head to the {b} and examine it.",
                (SlotSpec("a", ANY_CLASSES), SlotSpec("b", ANY_CLASSES)),
                ((_insp("a"),), (_insp("b"),))),
        Variant("B1-c", "Go take a close look at the {a}.",
                (SlotSpec("a", ANY_CLASSES),),
                ((_insp("a"),),)),
    ),
    2: (
        Variant("B2-a", "Pick up the {a} and place it on the {b}.",
                (SlotSpec("a", PORTABLE_SMALL), SlotSpec("b", SURFACE_CLASSES)),
                ((_hold("a"),), (_placed("a", "b"),))),
        Variant("B2-b", "Collect the {a} and arrange it on the {b}.",
                (SlotSpec("a", PORTABLE_SMALL), SlotSpec("b", SURFACE_CLASSES)),
                ((_hold("a"),), (_placed("a", "b"),))),
        Variant("B2-c", "Grab the {a} and set it down on the {b}.",
                (SlotSpec("a", PORTABLE_SMALL), SlotSpec("b", SURFACE_CLASSES)),
                ((_hold("a"),), (_placed("a", "b"),))),
    ),
    3: (
        Variant("B3-a", "First turn on the {a}, then turn off the {b}.",
                (SlotSpec("a", SWITCH_CLASSES, ("is_on", False)),
                 SlotSpec("b", SWITCH_CLASSES, ("is_on", True))),
                ((_se("a", "is_on", True),), (_se("b", "is_on", False),))),
        Variant("B3-b", "Switch on the {a} and then switch off the {b}.",
                (SlotSpec("a", SWITCH_CLASSES, ("is_on", False)),
                 SlotSpec("b", SWITCH_CLASSES, ("is_on", True))),
                ((_se("a", "is_on", True),), (_se("b", "is_on", False),))),
        Variant("B3-c", "Turn on the {a}.",
                (SlotSpec("a", SWITCH_CLASSES, ("is_on", False)),),
                ((_se("a", "is_on", True),),)),
    ),
    4: (
        Variant("B4-a", "Open the {a} to check inside, then close the {b}.",
                (SlotSpec("a", DOOR_CLASSES, ("is_open", False)),
                 SlotSpec("b", DOOR_CLASSES, ("is_open", True))),
                ((_se("a", "is_open", True),), (_se("b", "is_open", False),))),
        Variant("B4-b", "First open the {a}, then go close the {b}.",
                (SlotSpec("a", DOOR_CLASSES, ("is_open", False)),
                 SlotSpec("b", DOOR_CLASSES, ("is_open", True))),
                ((_se("a", "is_open", True),), (_se("b", "is_open", False),))),
        Variant("B4-c", "Open the {a}.",
                (SlotSpec("a", DOOR_CLASSES, ("is_open", False)),),
                ((_se("a", "is_open", True),),)),
        Variant("B4-d", "Close the {a}.",
                (SlotSpec("a", DOOR_CLASSES, ("is_open", True)),),
                ((_se("a", "is_open", False),),)),
    ),
    5: (
        Variant("R5-a", "I need to use the restroom urgently.",
                (SlotSpec("t", ("toilet_cover",), ("is_open", False)),),
                ((_se("t", "is_open", True),),),
                keywords=("restroom", "bathroom", "toilet")),
        Variant("R5-b", "I just woke up and my mouth feels gross. I need to freshen up.",
                (SlotSpec("f", ("faucet",), ("is_on", False)),),
                ((_se("f", "is_on", True),),),
                keywords=("mouth", "freshen", "teeth", "brush")),
        Variant("R5-c", "I'm exhausted and just need to lie down for a while.",
                (SlotSpec("b", ("bed",)),),
                ((_insp("b"),),),
                keywords=("lie down", "exhausted", "tired", "sleep", "nap")),
        Variant("R5-d", "I feel sweaty and grimy. I need to clean myself up.",
                (SlotSpec("s", ("shower",), ("is_on", False)),),
                ((_se("s", "is_on", True),),),
                keywords=("sweaty", "grimy", "shower", "clean myself")),
        Variant("R5-e", "My hands are sticky; I need to wash them.",
                (SlotSpec("f", ("faucet",), ("is_on", False)),),
                ((_se("f", "is_on", True),),),
                keywords=("sticky", "wash")),
        Variant("R5-f", "A long soak would fix everything right now.",
                (SlotSpec("b", ("bathtub",)),),
                ((_insp("b"),),),
                keywords=("soak",)),
        Variant("R5-g", "I can barely keep my eyes open; I need somewhere to crash.",
                (SlotSpec("b", ("bed",)),),
                ((_insp("b"),),),
                keywords=("crash", "eyes open")),
        Variant("R5-h", "Someone left the water running in there; make it stop.",
                (SlotSpec("f", ("faucet",), ("is_on", True)),),
                ((_se("f", "is_on", False),),),
                keywords=("water running", "make it stop")),
    ),
    6: (
        Variant("R6-a", "I'm parched and need a glass of water.",
                (SlotSpec("f", ("faucet",), ("is_on", False)),
                 SlotSpec("c", ("cup",), ("is_filled", False))),
                ((_se("f", "is_on", True),), (_se("c", "is_filled", True),)),
                keywords=("parched", "thirsty", "glass of water")),
        Variant("R6-b", "I'd like a warm cup of coffee to start the day.",
                (SlotSpec("m", ("coffee_maker",), ("is_on", False)),),
                ((_se("m", "is_on", True),),),
                keywords=("coffee",)),
        Variant("R6-c", "I'm hungry. Is there anything to eat in here?",
                (SlotSpec("r", ("refrigerator",), ("is_open", False)),),
                ((_se("r", "is_open", True),),),
                keywords=("hungry", "eat", "food")),
        Variant("R6-d", "Could you get some water ready for the cat?",
                (SlotSpec("b", ("bowl",), ("is_filled", False)),),
                ((_se("b", "is_filled", True),),),
                keywords=("cat",)),
        Variant("R6-e", "Time for a midnight snack; let me see what's left.",
                (SlotSpec("r", ("refrigerator",), ("is_open", False)),),
                ((_se("r", "is_open", True),),),
                keywords=("midnight", "snack")),
        Variant("R6-f", "I want to heat something up for dinner.",
                (SlotSpec("s", ("stove",), ("is_on", False)),),
                ((_se("s", "is_on", True),),),
                keywords=("heat", "dinner")),
        Variant("R6-g", "Fetch me something cold to drink, fill a cup if you can.",
                (SlotSpec("c", ("cup",), ("is_filled", False)),),
                ((_se("c", "is_filled", True),),),
                keywords=("cold", "drink", "fill a cup")),
        Variant("R6-h", "Let's get something brewing before the guests arrive.",
                (SlotSpec("m", ("coffee_maker",), ("is_on", False)),),
                ((_se("m", "is_on", True),),),
                keywords=("brewing", "guests")),
        Variant("R6-i", "My throat is so dry after all that talking.",
                (SlotSpec("c", ("cup",), ("is_filled", False)),),
                ((_se("c", "is_filled", True),),),
                keywords=("throat",)),
    ),
    7: (
        Variant("R7-a", "The room is really dim. I need more light.",
                (SlotSpec("l", LAMP_CLASSES, ("is_on", False)),),
                ((_se("l", "is_on", True),),),
                keywords=("dim", "light", "dark", "bright")),
        Variant("R7-b", "It's way too loud in here. I can't hear myself think.",
                (SlotSpec("s", ("speaker", "tv"), ("is_on", True)),),
                ((_se("s", "is_on", False),),),
                keywords=("loud", "noisy", "hear myself", "quiet")),
        Variant("R7-c", "Someone left the oven door open. I need it closed for safety.",
                (SlotSpec("o", ("oven",), ("is_open", True)),),
                ((_se("o", "is_open", False),),),
                keywords=("oven", "safety")),
        Variant("R7-d", "Nobody is watching anything. Save some electricity, please.",
                (SlotSpec("t", ("tv",), ("is_on", True)),),
                ((_se("t", "is_on", False),),),
                keywords=("electricity", "watching", "power")),
        Variant("R7-e", "The place feels gloomy; brighten it up a little.",
                (SlotSpec("l", LAMP_CLASSES, ("is_on", False)),),
                ((_se("l", "is_on", True),),),
                keywords=("gloomy", "brighten")),
        Variant("R7-f", "I'm done cooking; the stovetop shouldn't stay hot.",
                (SlotSpec("s", ("stove",), ("is_on", True)),),
                ((_se("s", "is_on", False),),),
                keywords=("stovetop", "done cooking")),
        Variant("R7-g", "We're heading out; the computer doesn't need to keep going.",
                (SlotSpec("c", ("computer",), ("is_on", True)),),
                ((_se("c", "is_on", False),),),
                keywords=("computer", "heading out")),
        Variant("R7-h", "That dripping tap is driving me crazy.",
                (SlotSpec("f", ("faucet",), ("is_on", True)),),
                ((_se("f", "is_on", False),),),
                keywords=("dripping", "tap")),
    ),
    8: (
        Variant("L8-a", "Get ready for a late-night study session: turn on the {l}, "
                        "power on the {c}, and bring the {p} over to the {d}.",
                (SlotSpec("l", LAMP_CLASSES, ("is_on", False)),
                 SlotSpec("c", ("computer",), ("is_on", False)),
                 SlotSpec("p", ("keyboard", "book", "mouse")),
                 SlotSpec("d", ("desk",))),
                ((_se("l", "is_on", True),), (_se("c", "is_on", True),),
                 (_placed("p", "d"),))),
        Variant("L8-b", "Set up the workspace: switch on the {l}, place the {p} "
                        "on the {d}, and open the {dr}.",
                (SlotSpec("l", LAMP_CLASSES, ("is_on", False)),
                 SlotSpec("p", ("keyboard", "book", "mouse")),
                 SlotSpec("d", ("desk",)),
                 SlotSpec("dr", ("drawer", "wardrobe"), ("is_open", False))),
                ((_se("l", "is_on", True),), (_placed("p", "d"),),
                 (_se("dr", "is_open", True),))),
        Variant("L8-c", "Prep the study corner: power on the {c}, bring the {p} "
                        "to the {d}, and turn on the {l}.",
                (SlotSpec("c", ("computer",), ("is_on", False)),
                 SlotSpec("p", ("keyboard", "book", "mouse")),
                 SlotSpec("d", ("desk",)),
                 SlotSpec("l", LAMP_CLASSES, ("is_on", False))),
                ((_se("c", "is_on", True),), (_placed("p", "d"),),
                 (_se("l", "is_on", True),))),
    ),
    9: (
        Variant("L9-a", "Set up for a movie night: turn on the {t}, turn on the "
                        "{s}, and place the {p} on the {ct}.",
                (SlotSpec("t", ("tv",), ("is_on", False)),
                 SlotSpec("s", ("speaker",), ("is_on", False)),
                 SlotSpec("p", ("wine_bottle", "candle", "remote_control", "book")),
                 SlotSpec("ct", ("coffee_table", "end_table"))),
                ((_se("t", "is_on", True),), (_se("s", "is_on", True),),
                 (_placed("p", "ct"),))),
        Variant("L9-b", "Party prep: switch on the {s}, put the {p} on the {ct}, "
                        "and light things up with the {l}.",
                (SlotSpec("s", ("speaker",), ("is_on", False)),
                 SlotSpec("p", ("wine_bottle", "candle", "book")),
                 SlotSpec("ct", ("coffee_table", "end_table", "shelf")),
                 SlotSpec("l", LAMP_CLASSES, ("is_on", False))),
                ((_se("s", "is_on", True),), (_placed("p", "ct"),),
                 (_se("l", "is_on", True),))),
        Variant("L9-c", "Get cozy: turn on the {t}, place the {p} on the {ct}, "
                        "and turn off the {l}.",
                (SlotSpec("t", ("tv",), ("is_on", False)),
                 SlotSpec("p", ("candle", "book", "remote_control")),
                 SlotSpec("ct", ("coffee_table", "end_table")),
                 SlotSpec("l", LAMP_CLASSES, ("is_on", True))),
                ((_se("t", "is_on", True),), (_placed("p", "ct"),),
                 (_se("l", "is_on", False),))),
    ),
    10: (
        Variant("L10-a", "Do a thorough tidy-up: place the {p1} on the {s1}, "
                         "move the {p2} onto the {s2}, and close the {dc}.",
                (SlotSpec("p1", PORTABLE_SMALL), SlotSpec("s1", SURFACE_CLASSES),
                 SlotSpec("p2", PORTABLE_SMALL), SlotSpec("s2", SURFACE_CLASSES),
                 SlotSpec("dc", DOOR_CLASSES, ("is_open", True))),
                ((_placed("p1", "s1"),), (_placed("p2", "s2"),),
                 (_se("dc", "is_open", False),))),
        Variant("L10-b", "Straighten up: put the {p1} on the {s1}, stow the {p2} "
                         "on the {s2}, and turn off the {sw}.",
                (SlotSpec("p1", PORTABLE_SMALL), SlotSpec("s1", SURFACE_CLASSES),
                 SlotSpec("p2", PORTABLE_SMALL), SlotSpec("s2", SURFACE_CLASSES),
                 SlotSpec("sw", SWITCH_CLASSES, ("is_on", True))),
                ((_placed("p1", "s1"),), (_placed("p2", "s2"),),
                 (_se("sw", "is_on", False),))),
        Variant("L10-c", "Quick cleanup: return the {p1} to the {s1} and close the {dc}.",
                (SlotSpec("p1", PORTABLE_SMALL), SlotSpec("s1", SURFACE_CLASSES),
                 SlotSpec("dc", DOOR_CLASSES, ("is_open", True))),
                ((_placed("p1", "s1"),), (_se("dc", "is_open", False),))),
        Variant("L10-d", "Tidy things up: put the {p1} on the {s1} and stow the {p2} on the {s2}.",
                (SlotSpec("p1", PORTABLE_SMALL), SlotSpec("s1", SURFACE_CLASSES),
                 SlotSpec("p2", PORTABLE_SMALL), SlotSpec("s2", SURFACE_CLASSES)),
                ((_placed("p1", "s1"),), (_placed("p2", "s2"),))),
    ),
}


def keyword_goal_classes(instruction: str) -> list[tuple] | None:
    """Reasoning cue lookup: maps an utterance to its phrase entry's
    predicate specs with classes substituted. None when nothing matches.
    Cues match on word boundaries ("eat" must not fire inside "heat")."""
    lowered = instruction.lower()
    for variants in (VARIANTS[5], VARIANTS[6], VARIANTS[7]):
        for variant in variants:
            if any(re.search(rf"\b{re.escape(k)}\b", lowered)
                   for k in variant.keywords):
                slot_classes = {s.name: s.classes for s in variant.slots}
                out = []
                for group in variant.groups:
                    for kind, slot, key, value, surface in group:
                        out.append((kind, slot_classes[slot], key, value))
                return out
    return None


def _graph_view(graph: PlanningGraph) -> StateView:
    return StateView(
        step=0, agent_room=None, agent_position=(0.0, 0.0), holding=None,
        highlighted=None,
        objects={o.id: {"class": o.class_name, "room": o.room,
                        "position": (0.0, 0.0), "states": dict(o.states)}
                 for o in graph.objects})


def _build_goal(variant: Variant, bound: dict[str, ObjectNode]) -> GoalSpec:
    groups = []
    for group in variant.groups:
        preds = []
        for kind, slot, key, value, surface in group:
            if kind == "state_equals":
                preds.append(GoalPredicate.state_equals(bound[slot].class_name, key, value))
            elif kind == "placed_on":
                preds.append(GoalPredicate.placed_on(bound[slot].class_name,
                                                     bound[surface].class_name))
            elif kind == "inspected":
                preds.append(GoalPredicate.inspected(bound[slot].class_name))
            elif kind == "holding":
                preds.append(GoalPredicate.holding(bound[slot].class_name))
        groups.append(tuple(preds))
    return GoalSpec(groups=tuple(groups))


def _slot_pool(graph: PlanningGraph, slot: SlotSpec, scope_room: str | None,
               taken_classes: set[str]) -> list[ObjectNode]:
    if slot.classes:
        nodes = [n for c in slot.classes for n in graph.instances_of(c)]
    else:
        nodes = list(graph.objects)
    if scope_room is not None:
        nodes = [n for n in nodes if n.room == scope_room]
    if slot.require is not None:
        key, value = slot.require
        nodes = [n for n in nodes if n.states.get(key) == value]
    nodes = [n for n in nodes if n.class_name not in taken_classes]
    return sorted(nodes, key=lambda n: n.id)


def _bind(graph: PlanningGraph, variant: Variant, scope_room: str | None,
          rng: random.Random) -> dict[str, ObjectNode] | None:
    bound: dict[str, ObjectNode] = {}
    taken: set[str] = set()
    for slot in variant.slots:
        pool = _slot_pool(graph, slot, scope_room, taken)
        if not pool:
            return None
        node = pool[rng.randrange(len(pool))]
        bound[slot.name] = node
        taken.add(node.class_name)
    return bound


def _rooms_binding_all_slots(graph: PlanningGraph, variant: Variant) -> list[str]:
    out = []
    for room in graph.room_ids():
        taken: set[str] = set()
        ok = True
        for slot in variant.slots:
            pool = _slot_pool(graph, slot, room, taken)
            if not pool:
                ok = False
                break
            taken.add(pool[0].class_name)
        if ok:
            out.append(room)
    return out


def generate_candidates(graph: PlanningGraph, tier: Tier, scenario: int,
                        count: int, seed: int,
                        text_generator: Callable[[dict], str] | None = None
                        ) -> list[TaskCandidate]:
    """Deterministic template instantiation against a planning graph.

    Raises ExhaustedBindings when the scene cannot fill any template of the
    scenario; returns up to `count` distinct candidates otherwise.
    """
    name_tier = SCENARIOS.get(scenario)
    if name_tier is None or name_tier[1] is not tier:
        raise ValueError(f"scenario {scenario} does not belong to tier {tier.value}")
    rng = random.Random(seed)
    variants = VARIANTS[scenario]
    view = _graph_view(graph)
    room_ids = graph.room_ids()
    out: list[TaskCandidate] = []
    seen: set[tuple] = set()
    for _ in range(max(60, count * 14)):
        if len(out) >= count:
            break
        variant = variants[rng.randrange(len(variants))]
        rooms_ok = _rooms_binding_all_slots(graph, variant)
        if tier is Tier.REASONING:
            if not rooms_ok:
                continue
            start_room = rooms_ok[rng.randrange(len(rooms_ok))]
            bound = _bind(graph, variant, start_room, rng)
        elif rooms_ok and rng.random() < 0.55:
            # single-room flavored: bind everything inside the start room
            start_room = rooms_ok[rng.randrange(len(rooms_ok))]
            bound = _bind(graph, variant, start_room, rng)
        else:
            start_room = room_ids[rng.randrange(len(room_ids))]
            bound = _bind(graph, variant, None, rng)
        if bound is None:
            continue
        goal = _build_goal(variant, bound)
        if any(group_satisfied(g, view) for g in goal.groups):
            continue  # some group pre-satisfied: the task would be hollow
        key = (variant.id, tuple(sorted(n.id for n in bound.values())), start_room)
        if key in seen:
            continue
        seen.add(key)
        text = variant.text.format(**{k: n.class_name for k, n in bound.items()})
        if text_generator is not None:
            context = {"tier": tier.value, "scenario": scenario,
                       "slots": {k: n.class_name for k, n in bound.items()},
                       "default_text": text}
            text = text_generator(context) or text
        task = TaskSpec(task_id="", tier=tier, scenario=scenario,
                        instruction=text, goal=goal, cross_room=False,
                        apartment="", start_room=start_room,
                        budget=DEFAULT_BUDGET)
        out.append(TaskCandidate(task=task, template_id=variant.id,
                                 bound_objects=sorted(n.id for n in bound.values()),
                                 seed=seed))
    if not out:
        raise ExhaustedBindings(f"scenario {scenario} has no bindable template in this scene")
    return out
