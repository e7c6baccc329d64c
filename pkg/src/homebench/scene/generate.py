"""Procedural apartment generator.

Layout scheme: two horizontal strips of rooms sharing full-height walls,
which guarantees a tiling with exact shared boundaries. Doorways are cut
into a random spanning tree of the wall-adjacency graph (plus a few extras),
so the doorway graph is connected by construction. All coordinates are
quantized to 3 decimals at creation, making serialization lossless.

Equal (config, seed) pairs produce byte-identical scenes: the only entropy
source is one random.Random consumed in a fixed order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from ..errors import InfeasibleConfig
from ..geometry import Rect, dist, quant
from . import catalog as default_tables
from .model import AffordanceType, Doorway, ObjectClass, ObjectInstance, Room, SceneGraph

_INSET = 0.5          # object clearance from walls, meters
_MIN_SPACING = 0.35   # preferred clearance between loose objects
_DOOR_HALF = 0.45     # doorway half-width
_MIN_WALL_OVERLAP = 1.4


@dataclass
class GeneratorConfig:
    room_count_range: tuple[int, int] = (4, 8)
    catalog: list[ObjectClass] = field(default_factory=default_tables.default_catalog)
    target_object_count: int = 40
    seed: int = 0
    extra_doorway_prob: float = 0.25
    room_side_range: tuple[float, float] = (3.05, 5.95)
    mandatory_placements: dict = field(
        default_factory=lambda: dict(default_tables.MANDATORY_PLACEMENTS))
    fallback_placements: tuple = default_tables.FALLBACK_PLACEMENTS
    switch_on_prob: float = 0.35
    door_open_prob: float = 0.25
    filled_prob: float = 0.15
    stacked_prob: float = 0.2


def _partition(total: float, k: int, lo: float, hi: float,
               rng: random.Random) -> list[float]:
    """Split total into k parts, each in [lo, hi]."""
    extra = total - lo * k
    weights = [rng.random() + 0.05 for _ in range(k)]
    parts = [0.0] * k
    remaining = extra
    active = list(range(k))
    for _ in range(k + 1):
        if remaining <= 1e-9 or not active:
            break
        wsum = sum(weights[i] for i in active)
        add, remaining = remaining, 0.0
        spilled = []
        for i in active:
            share = add * weights[i] / wsum
            cap = (hi - lo) - parts[i]
            if share >= cap:
                parts[i] += cap
                remaining += share - cap
                spilled.append(i)
            else:
                parts[i] += share
        for i in spilled:
            active.remove(i)
    return [lo + p for p in parts]


def _strip_boundaries(total: float, widths: list[float]) -> list[float]:
    bounds = [0.0]
    acc = 0.0
    for w in widths[:-1]:
        acc += w
        bounds.append(quant(acc))
    bounds.append(quant(total))
    return bounds


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def _cut_doorway(wall_axis: str, wall_pos: float, lo: float, hi: float,
                 rng: random.Random) -> tuple[tuple[float, float], tuple[float, float]]:
    margin = 0.25 + _DOOR_HALF
    center = quant(rng.uniform(lo + margin, hi - margin))
    if wall_axis == "v":  # vertical wall at x = wall_pos
        return (wall_pos, quant(center - _DOOR_HALF)), (wall_pos, quant(center + _DOOR_HALF))
    return (quant(center - _DOOR_HALF), wall_pos), (quant(center + _DOOR_HALF), wall_pos)


def generate_apartment(config: GeneratorConfig) -> SceneGraph:
    """Generate a connected 4-8 room apartment with placed, stateful objects.

    Raises InfeasibleConfig when the catalog cannot satisfy the mandatory
    placements or the room-count range leaves the supported [4, 8] band.
    """
    lo_n, hi_n = config.room_count_range
    if lo_n < 4 or hi_n > 8 or lo_n > hi_n:
        raise InfeasibleConfig(f"room_count_range {config.room_count_range} not within [4, 8]")
    if not config.catalog:
        raise InfeasibleConfig("empty catalog")
    by_name = {c.class_name: c for c in config.catalog}
    for label, classes in sorted(config.mandatory_placements.items()):
        for cname in classes:
            if cname not in by_name:
                raise InfeasibleConfig(f"catalog lacks mandatory class {cname!r} for {label}")
    for cname, _prefs in config.fallback_placements:
        if cname not in by_name:
            raise InfeasibleConfig(f"catalog lacks mandatory class {cname!r}")

    rng = random.Random(config.seed)
    n_rooms = rng.randint(lo_n, hi_n)
    n_top = (n_rooms + 1) // 2
    n_bot = n_rooms - n_top
    side_lo, side_hi = config.room_side_range

    width_lo = side_lo * max(n_top, n_bot)
    width_hi = side_hi * min(n_top, n_bot)
    total_w = quant(rng.uniform(width_lo, min(width_hi, width_lo + 6.0)))
    xs_top = _strip_boundaries(total_w, _partition(total_w, n_top, side_lo, side_hi, rng))
    xs_bot = _strip_boundaries(total_w, _partition(total_w, n_bot, side_lo, side_hi, rng))
    h_top = quant(rng.uniform(side_lo, side_hi))
    h_bot = quant(rng.uniform(side_lo, side_hi))
    y_mid = h_top
    y_max = quant(h_top + h_bot)

    rects: list[Rect] = []
    for i in range(n_top):
        rects.append(Rect(xs_top[i], 0.0, xs_top[i + 1], y_mid))
    for j in range(n_bot):
        rects.append(Rect(xs_bot[j], y_mid, xs_bot[j + 1], y_max))

    labels = list(default_tables.MANDATORY_LABELS)
    labels += list(default_tables.EXTRA_LABELS)[:n_rooms - len(labels)]
    rng.shuffle(labels)

    rooms = []
    for idx, (rect, label) in enumerate(zip(rects, labels)):
        cx, cy = rect.center()
        rooms.append(Room(id=f"room_{idx}", label=label, region=rect,
                          entry_point=(quant(cx), quant(cy))))

    # Wall adjacency: (i, j, axis, wall position, overlap interval)
    walls = []
    for i in range(n_top - 1):
        walls.append((i, i + 1, "v", xs_top[i + 1], 0.0, y_mid))
    for j in range(n_bot - 1):
        walls.append((n_top + j, n_top + j + 1, "v", xs_bot[j + 1], y_mid, y_max))
    for i in range(n_top):
        for j in range(n_bot):
            lo = max(xs_top[i], xs_bot[j])
            hi = min(xs_top[i + 1], xs_bot[j + 1])
            if hi - lo >= _MIN_WALL_OVERLAP:
                walls.append((i, n_top + j, "h", y_mid, lo, hi))
    walls = [w for w in walls if w[5] - w[4] >= _MIN_WALL_OVERLAP]

    order = list(range(len(walls)))
    rng.shuffle(order)
    uf = _UnionFind(n_rooms)
    chosen = []
    skipped = []
    for k in order:
        if uf.union(walls[k][0], walls[k][1]):
            chosen.append(k)
        else:
            skipped.append(k)
    for k in skipped:
        if rng.random() < config.extra_doorway_prob:
            chosen.append(k)

    doorways = []
    for k in sorted(chosen):
        i, j, axis, pos, lo, hi = walls[k]
        a, b = _cut_doorway(axis, pos, lo, hi, rng)
        doorways.append(Doorway(room_a=f"room_{i}", room_b=f"room_{j}", a=a, b=b))

    scene = SceneGraph(rooms=rooms, doorways=doorways, objects=[],
                       catalog=list(config.catalog))
    _place_objects(scene, config, by_name, rng)
    return scene


def _place_objects(scene: SceneGraph, config: GeneratorConfig,
                   by_name: dict[str, ObjectClass], rng: random.Random) -> None:
    counters: dict[str, int] = {}
    per_room_class: dict[tuple[str, str], int] = {}

    def next_id(cname: str) -> str:
        counters[cname] = counters.get(cname, 0) + 1
        return f"{cname}_{counters[cname]}"

    def sample_position(room: Room) -> tuple[float, float]:
        region = room.region
        placed = [o.position for o in scene.objects if o.room == room.id and o.position]
        for _ in range(20):
            p = (quant(rng.uniform(region.x0 + _INSET, region.x1 - _INSET)),
                 quant(rng.uniform(region.y0 + _INSET, region.y1 - _INSET)))
            if all(dist(p, q) >= _MIN_SPACING for q in placed):
                return p
        return p

    def place(cname: str, room: Room, position=None) -> ObjectInstance:
        cls = by_name[cname]
        obj = ObjectInstance(id=next_id(cname), obj_class=cls, room=room.id,
                             position=position or sample_position(room),
                             states=dict(cls.default_states))
        scene.objects.append(obj)
        per_room_class[(room.id, cname)] = per_room_class.get((room.id, cname), 0) + 1
        return obj

    label_rooms: dict[str, list[Room]] = {}
    for room in scene.rooms:
        label_rooms.setdefault(room.base_label, []).append(room)

    for label in sorted(config.mandatory_placements):
        for room in label_rooms.get(label, []):
            for cname in config.mandatory_placements[label]:
                place(cname, room)
    for cname, prefs in config.fallback_placements:
        hit = next((label for label in prefs if label in label_rooms), None)
        if hit is not None and not any(o.class_name == cname for o in scene.objects):
            place(cname, label_rooms[hit][0])

    # Apartment entrance: a door object sitting on the first doorway.
    if "apartment_door" in by_name and scene.doorways:
        front = scene.doorways[0]
        cls = by_name["apartment_door"]
        scene.objects.append(ObjectInstance(
            id=next_id("apartment_door"), obj_class=cls, room=front.room_a,
            position=front.midpoint(), states=dict(cls.default_states)))

    # Filler objects up to the target count, honoring co-occurrence tables.
    present_labels = sorted(label_rooms)
    fillable = [c for c in config.catalog
                if c.class_name != "apartment_door"
                and any(l in present_labels for l in c.allowed_rooms)]
    tries = 0
    while len(scene.objects) < config.target_object_count and tries < 400:
        tries += 1
        cls = fillable[rng.randrange(len(fillable))]
        rooms = [r for label in cls.allowed_rooms for r in label_rooms.get(label, [])]
        if not rooms:
            continue
        room = rooms[rng.randrange(len(rooms))]
        cap = 1 if cls.affordance in (AffordanceType.ANCHOR, AffordanceType.SURFACE) else 2
        if per_room_class.get((room.id, cls.class_name), 0) >= cap:
            continue
        place(cls.class_name, room)

    scene.objects.sort(key=lambda o: o.id)

    # Initial dynamic states, in sorted-object order for determinism.
    for obj in scene.objects:
        aff = obj.affordance
        if aff is AffordanceType.SWITCH:
            obj.states["is_on"] = rng.random() < config.switch_on_prob
        elif aff is AffordanceType.DOOR_CONTAINER:
            obj.states["is_open"] = rng.random() < config.door_open_prob
        elif aff is AffordanceType.CONTAINER_FLUID:
            obj.states["is_filled"] = rng.random() < config.filled_prob
        if obj.obj_class.portable and rng.random() < config.stacked_prob:
            surfaces = [o for o in scene.objects
                        if o.room == obj.room and o.affordance is AffordanceType.SURFACE]
            if surfaces:
                surface = surfaces[rng.randrange(len(surfaces))]
                obj.states["on_top_of"] = surface.id
                obj.position = surface.position

    scene.__post_init__()  # refresh lookup tables after mutation
