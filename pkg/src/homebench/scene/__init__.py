from .catalog import EXTRA_LABELS, MANDATORY_LABELS, default_catalog
from .generate import GeneratorConfig, generate_apartment
from .io import (load_scene, save_scene, scene_digest, scene_from_dict,
                 scene_from_json, scene_to_dict, scene_to_json)
from .model import (AFFORDANCE_STATE_KEYS, FLUID_SOURCE_CAPABLE, AffordanceType,
                    Doorway, ObjectClass, ObjectInstance, Room, SceneGraph,
                    shortest_room_path, walk_path)
from .validate import Diagnostic, validate_scene

__all__ = [
    "AFFORDANCE_STATE_KEYS", "AffordanceType", "Diagnostic", "Doorway",
    "EXTRA_LABELS", "FLUID_SOURCE_CAPABLE", "GeneratorConfig", "MANDATORY_LABELS",
    "ObjectClass", "ObjectInstance", "Room", "SceneGraph", "default_catalog",
    "generate_apartment", "load_scene", "save_scene", "scene_digest",
    "scene_from_dict", "scene_from_json", "scene_to_dict", "scene_to_json",
    "shortest_room_path", "validate_scene", "walk_path",
]
