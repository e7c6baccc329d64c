"""Egocentric observations and counter-based perception noise.

Noise is a pure function of (seed, step, object id): each visible entry is
dropped when a keyed uniform falls below the drop probability. Because the
uniform is shared across probabilities, the surviving set at a higher drop
rate nests inside the lower-rate set for the same seed.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from ..engine.state import WorldState
from ..engine.visibility import visible_objects


@dataclass(frozen=True)
class NoiseConfig:
    perception_drop: float = 0.0
    memory_drop: float = 0.0
    seed: int = 0

    def __post_init__(self):
        for name in ("perception_drop", "memory_drop"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {p}")


def keyed_uniform(*parts) -> float:
    """Deterministic uniform in [0, 1) from a tuple of key parts."""
    digest = hashlib.blake2b("|".join(str(p) for p in parts).encode(),
                             digest_size=8).digest()
    return int.from_bytes(digest, "big") / 2.0 ** 64


@dataclass
class Observation:
    step: int
    room_id: str | None
    room_label: str | None
    visible: list[dict]            # {"id", "class", "states", "near"}
    holding: str | None
    highlighted: str | None
    room_options: list[str]        # all room labels, constant per episode
    last_action_result: dict | None = None
    last_grounding: object = None  # "ok", violation dict, or None on step 1

    def visible_ids(self) -> list[str]:
        return [v["id"] for v in self.visible]

    def to_dict(self) -> dict:
        return {"step": self.step, "room_id": self.room_id,
                "room_label": self.room_label, "visible": self.visible,
                "holding": self.holding, "highlighted": self.highlighted,
                "room_options": self.room_options,
                "last_action_result": self.last_action_result,
                "last_grounding": self.last_grounding}


def perceive(state: WorldState, noise: NoiseConfig, step: int,
             last_action_result: dict | None = None,
             last_grounding: object = None) -> Observation:
    """Oracle visibility filtered by seeded perception noise. drop=0 returns
    the oracle list unchanged; drop=1 empties it."""
    room = state.current_room
    entries = []
    for v in visible_objects(state):
        if noise.perception_drop > 0.0 and \
                keyed_uniform(noise.seed, step, v.id) < noise.perception_drop:
            continue
        entries.append(v.to_dict())
    return Observation(
        step=step,
        room_id=room.id if room else None,
        room_label=room.label if room else None,
        visible=entries,
        holding=state.holding,
        highlighted=state.highlighted,
        room_options=state.scene.room_labels(),
        last_action_result=last_action_result,
        last_grounding=last_grounding,
    )
