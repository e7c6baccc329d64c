import pytest

from homebench.engine.state import AgentPose, WorldState
from homebench.geometry import Rect
from homebench.scene.generate import GeneratorConfig, generate_apartment
from homebench.scene.model import (AffordanceType, Doorway, ObjectClass,
                                   ObjectInstance, Room, SceneGraph)
from homebench.taskgen.suite import SuiteConfig, build_suite

_A = AffordanceType


def micro_catalog():
    return [
        ObjectClass("fridge", _A.DOOR_CONTAINER, default_states={"is_open": False},
                    allowed_rooms=("kitchen",)),
        ObjectClass("lamp", _A.SWITCH, default_states={"is_on": False},
                    allowed_rooms=("bedroom",)),
        ObjectClass("faucet", _A.SWITCH, capability_flags=frozenset({"fluid_source_capable"}),
                    default_states={"is_on": False}, allowed_rooms=("kitchen",)),
        ObjectClass("cup", _A.CONTAINER_FLUID,
                    default_states={"is_filled": False, "on_top_of": None},
                    allowed_rooms=("kitchen",)),
        ObjectClass("bowl", _A.CONTAINER_FLUID,
                    default_states={"is_filled": False, "on_top_of": None},
                    allowed_rooms=("kitchen",)),
        ObjectClass("table", _A.SURFACE, allowed_rooms=("bedroom",)),
        ObjectClass("pillow", _A.PICKUP, default_states={"on_top_of": None},
                    allowed_rooms=("bedroom",)),
        ObjectClass("chess_piece", _A.PICKUP, only_show_when_near=True,
                    default_states={"on_top_of": None}, allowed_rooms=("bedroom",)),
        ObjectClass("bed", _A.ANCHOR, allowed_rooms=("bedroom",)),
        ObjectClass("dispenser", _A.FLUID_SOURCE, allowed_rooms=("kitchen",)),
    ]


def micro_scene() -> SceneGraph:
    """Four rooms in a 2x2 block; objects with known positions sit in the
    lower two rooms so engine tests can reason about exact distances."""
    catalog = {c.class_name: c for c in micro_catalog()}

    def obj(oid, cname, room, pos, **states):
        base = dict(catalog[cname].default_states)
        base.update(states)
        return ObjectInstance(id=oid, obj_class=catalog[cname], room=room,
                              position=pos, states=base)

    return SceneGraph(
        rooms=[
            Room(id="room_a", label="kitchen", region=Rect(0.0, 0.0, 4.0, 4.0),
                 entry_point=(2.0, 2.0)),
            Room(id="room_b", label="bedroom", region=Rect(4.0, 0.0, 8.0, 4.0),
                 entry_point=(6.0, 2.0)),
            Room(id="room_c", label="bathroom", region=Rect(0.0, 4.0, 4.0, 8.0),
                 entry_point=(2.0, 6.0)),
            Room(id="room_d", label="study", region=Rect(4.0, 4.0, 8.0, 8.0),
                 entry_point=(6.0, 6.0)),
        ],
        doorways=[
            Doorway(room_a="room_a", room_b="room_b", a=(4.0, 1.5), b=(4.0, 2.4)),
            Doorway(room_a="room_a", room_b="room_c", a=(1.5, 4.0), b=(2.4, 4.0)),
            Doorway(room_a="room_b", room_b="room_d", a=(6.0, 4.0), b=(6.9, 4.0)),
        ],
        objects=[
            obj("fridge_1", "fridge", "room_a", (1.0, 1.0)),
            obj("faucet_1", "faucet", "room_a", (1.0, 3.0)),
            obj("cup_1", "cup", "room_a", (2.0, 1.0)),
            obj("bowl_1", "bowl", "room_a", (2.6, 1.2)),
            obj("lamp_1", "lamp", "room_b", (5.0, 1.0)),
            obj("table_1", "table", "room_b", (6.0, 2.6)),
            obj("pillow_1", "pillow", "room_b", (7.0, 3.0)),
            obj("chess_1", "chess_piece", "room_b", (7.5, 0.5)),
            obj("bed_1", "bed", "room_b", (7.0, 1.5)),
            obj("dispenser_1", "dispenser", "room_a", (3.4, 3.4)),
        ],
        catalog=list(catalog.values()),
    )


def micro_state(room: str = "room_a", position=None, yaw: float = 0.0) -> WorldState:
    scene = micro_scene()
    entry = scene.room(room).entry_point
    return WorldState(scene=scene,
                      agent=AgentPose(position=position or entry, yaw=yaw))


@pytest.fixture
def state():
    return micro_state()


@pytest.fixture(scope="session")
def scenes5():
    return {f"apt_{i}": generate_apartment(GeneratorConfig(seed=100 + i))
            for i in range(5)}


@pytest.fixture(scope="session")
def suite300(scenes5):
    suite, verification = build_suite(sorted(scenes5.items()), SuiteConfig(), seed=42)
    return suite, verification
