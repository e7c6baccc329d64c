"""Scene file serialization.

One scene per JSON file, top-level keys rooms/doorways/objects/catalog.
Serialization is canonical (sorted keys, fixed indentation), so equal scenes
produce byte-identical files and serialize->parse->serialize is the identity.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from ..errors import InvalidScene
from ..geometry import Rect
from .model import AffordanceType, Doorway, ObjectClass, ObjectInstance, Room, SceneGraph

SCENE_FORMAT_VERSION = 1


def scene_to_dict(scene: SceneGraph) -> dict:
    return {
        "format_version": SCENE_FORMAT_VERSION,
        "rooms": [
            {"id": r.id, "label": r.label,
             "region": [r.region.x0, r.region.y0, r.region.x1, r.region.y1],
             "entry_point": list(r.entry_point)}
            for r in scene.rooms
        ],
        "doorways": [
            {"rooms": [d.room_a, d.room_b], "segment": [list(d.a), list(d.b)]}
            for d in scene.doorways
        ],
        "objects": [
            {"id": o.id, "class": o.class_name, "room": o.room,
             "position": list(o.position) if o.position else None,
             "states": dict(sorted(o.states.items()))}
            for o in scene.objects
        ],
        "catalog": [
            {"class_name": c.class_name, "affordance": c.affordance.value,
             "capability_flags": sorted(c.capability_flags),
             "only_show_when_near": c.only_show_when_near,
             "default_states": dict(sorted(c.default_states.items())),
             "allowed_rooms": list(c.allowed_rooms)}
            for c in scene.catalog
        ],
    }


def scene_from_dict(data: dict) -> SceneGraph:
    try:
        catalog = [
            ObjectClass(class_name=c["class_name"],
                        affordance=AffordanceType(c["affordance"]),
                        capability_flags=frozenset(c.get("capability_flags", [])),
                        only_show_when_near=c.get("only_show_when_near", False),
                        default_states=dict(c.get("default_states", {})),
                        allowed_rooms=tuple(c.get("allowed_rooms", [])))
            for c in data["catalog"]
        ]
        by_name = {c.class_name: c for c in catalog}
        rooms = [
            Room(id=r["id"], label=r["label"],
                 region=Rect(*[float(v) for v in r["region"]]),
                 entry_point=tuple(float(v) for v in r["entry_point"]))
            for r in data["rooms"]
        ]
        doorways = [
            Doorway(room_a=d["rooms"][0], room_b=d["rooms"][1],
                    a=tuple(float(v) for v in d["segment"][0]),
                    b=tuple(float(v) for v in d["segment"][1]))
            for d in data["doorways"]
        ]
        objects = []
        for o in data["objects"]:
            if o["class"] not in by_name:
                raise InvalidScene(f"object {o['id']} references unknown class {o['class']}")
            position = tuple(float(v) for v in o["position"]) if o["position"] else None
            objects.append(ObjectInstance(id=o["id"], obj_class=by_name[o["class"]],
                                          room=o["room"], position=position,
                                          states=dict(o["states"])))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidScene(f"malformed scene document: {exc}") from exc
    return SceneGraph(rooms=rooms, doorways=doorways, objects=objects, catalog=catalog)


def scene_to_json(scene: SceneGraph) -> str:
    return json.dumps(scene_to_dict(scene), sort_keys=True, indent=1) + "\n"


def scene_from_json(text: str) -> SceneGraph:
    return scene_from_dict(json.loads(text))


def save_scene(scene: SceneGraph, path: str | Path) -> None:
    Path(path).write_text(scene_to_json(scene))


def load_scene(path: str | Path) -> SceneGraph:
    return scene_from_json(Path(path).read_text())


def scene_digest(scene: SceneGraph) -> str:
    """Content hash of the canonical serialization (initial states included)."""
    blob = json.dumps(scene_to_dict(scene), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()
