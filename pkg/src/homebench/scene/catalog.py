"""Shipped default object catalog and room co-occurrence tables.

Sizes here are generator targets, not hard limits: catalogs are plain data
and callers can pass their own. Base room labels used by allowed_rooms:
bedroom, bathroom, kitchen, living room, study, dining room, hallway,
laundry room.
"""

from __future__ import annotations

from .model import FLUID_SOURCE_CAPABLE, AffordanceType, ObjectClass

MANDATORY_LABELS = ("bedroom", "bathroom", "kitchen", "living room")
EXTRA_LABELS = ("study", "dining room", "hallway", "laundry room")

_A = AffordanceType


def _cls(name: str, affordance: AffordanceType, rooms: tuple[str, ...], *,
         near_only: bool = False, fluid: bool = False) -> ObjectClass:
    defaults: dict = {}
    if affordance is _A.DOOR_CONTAINER:
        defaults["is_open"] = False
    elif affordance is _A.SWITCH:
        defaults["is_on"] = False
    elif affordance is _A.PICKUP:
        defaults["on_top_of"] = None
    elif affordance is _A.CONTAINER_FLUID:
        defaults["is_filled"] = False
        defaults["on_top_of"] = None
    flags = frozenset({FLUID_SOURCE_CAPABLE}) if fluid else frozenset()
    return ObjectClass(class_name=name, affordance=affordance,
                       capability_flags=flags, only_show_when_near=near_only,
                       default_states=defaults, allowed_rooms=rooms)


def default_catalog() -> list[ObjectClass]:
    any_room = MANDATORY_LABELS + EXTRA_LABELS
    return [
        # door/container
        _cls("apartment_door", _A.DOOR_CONTAINER, any_room),
        _cls("refrigerator", _A.DOOR_CONTAINER, ("kitchen",)),
        _cls("oven", _A.DOOR_CONTAINER, ("kitchen",)),
        _cls("drawer", _A.DOOR_CONTAINER, ("kitchen", "bedroom", "study")),
        _cls("wardrobe", _A.DOOR_CONTAINER, ("bedroom",)),
        _cls("toilet_cover", _A.DOOR_CONTAINER, ("bathroom",)),
        # switch
        _cls("table_lamp", _A.SWITCH, ("bedroom", "living room", "study")),
        _cls("floor_lamp", _A.SWITCH, ("living room", "bedroom")),
        _cls("ceiling_lamp", _A.SWITCH, any_room),
        _cls("tv", _A.SWITCH, ("living room", "bedroom")),
        _cls("speaker", _A.SWITCH, ("living room", "study")),
        _cls("computer", _A.SWITCH, ("study", "bedroom")),
        _cls("stove", _A.SWITCH, ("kitchen",)),
        _cls("coffee_maker", _A.SWITCH, ("kitchen",)),
        _cls("faucet", _A.SWITCH, ("kitchen", "bathroom", "laundry room"), fluid=True),
        _cls("shower", _A.SWITCH, ("bathroom",), fluid=True),
        # pickup
        _cls("pillow", _A.PICKUP, ("bedroom", "living room")),
        _cls("book", _A.PICKUP, ("study", "living room", "bedroom")),
        _cls("keyboard", _A.PICKUP, ("study", "bedroom")),
        _cls("mouse", _A.PICKUP, ("study", "bedroom"), near_only=True),
        _cls("remote_control", _A.PICKUP, ("living room",), near_only=True),
        _cls("wine_bottle", _A.PICKUP, ("living room", "kitchen", "dining room")),
        _cls("candle", _A.PICKUP, ("living room", "bedroom", "dining room"), near_only=True),
        _cls("white_queen", _A.PICKUP, ("living room", "study"), near_only=True),
        _cls("toothbrush", _A.PICKUP, ("bathroom",), near_only=True),
        _cls("apple", _A.PICKUP, ("kitchen", "dining room"), near_only=True),
        # surface
        _cls("dining_table", _A.SURFACE, ("dining room", "kitchen")),
        _cls("coffee_table", _A.SURFACE, ("living room",)),
        _cls("desk", _A.SURFACE, ("study", "bedroom")),
        _cls("dresser", _A.SURFACE, ("bedroom",)),
        _cls("counter", _A.SURFACE, ("kitchen",)),
        _cls("shelf", _A.SURFACE, ("living room", "study", "hallway")),
        _cls("end_table", _A.SURFACE, ("living room", "bedroom")),
        _cls("nightstand", _A.SURFACE, ("bedroom",)),
        # fluid source (always-on)
        _cls("water_dispenser", _A.FLUID_SOURCE, ("kitchen", "hallway")),
        # fluid container
        _cls("cup", _A.CONTAINER_FLUID, ("kitchen", "living room", "study")),
        _cls("bowl", _A.CONTAINER_FLUID, ("kitchen", "dining room")),
        # anchor
        _cls("bed", _A.ANCHOR, ("bedroom",)),
        _cls("sofa", _A.ANCHOR, ("living room",)),
        _cls("toilet", _A.ANCHOR, ("bathroom",)),
        _cls("sink", _A.ANCHOR, ("kitchen", "bathroom", "laundry room")),
        _cls("bathtub", _A.ANCHOR, ("bathroom",)),
    ]


# Classes guaranteed in every apartment that has the room label (first
# matching label wins; all four mandatory labels always exist).
MANDATORY_PLACEMENTS: dict[str, tuple[str, ...]] = {
    "kitchen": ("refrigerator", "oven", "stove", "faucet", "coffee_maker",
                "counter", "cup", "bowl", "apple", "sink"),
    "bathroom": ("toilet", "toilet_cover", "faucet", "shower", "toothbrush",
                 "bathtub"),
    "bedroom": ("bed", "pillow", "table_lamp", "dresser", "wardrobe",
                "nightstand"),
    "living room": ("sofa", "tv", "speaker", "coffee_table", "floor_lamp",
                    "end_table", "wine_bottle", "candle", "remote_control"),
    "study": ("desk", "computer", "keyboard", "table_lamp", "book", "mouse"),
    "dining room": ("dining_table", "bowl", "candle"),
    "hallway": ("shelf",),
    "laundry room": ("faucet", "sink"),
}

# Placed in the first room (by listed preference) present in the apartment.
FALLBACK_PLACEMENTS: tuple[tuple[str, tuple[str, ...]], ...] = (
    ("desk", ("study", "bedroom")),
    ("computer", ("study", "bedroom")),
    ("keyboard", ("study", "bedroom")),
    ("mouse", ("study", "bedroom")),
    ("book", ("study", "living room")),
    ("white_queen", ("living room", "study")),
    ("ceiling_lamp", ("living room", "bedroom")),
)
