"""Feasibility solver: breadth-first search over a macro-action space.

Macro semantics (the abstract space the solver and its test oracle share):

* state: (agent room, stood-by object or None, held object or None,
  highlighted object or None, per-object room/on_top_of/is_open/is_on/
  is_filled for the goal-relevant objects, count of satisfied goal groups);
* actions: move_to_room(room), move_to(obj in current room, not held),
  highlight(obj stood-by or held), open/close/turn_on/turn_off(obj stood-by),
  pick_up(portable obj stood-by, hands free), drop_held, place_on(surface
  stood-by), fill(held fluid container while stood by a running fluid
  source), pour(into fluid container stood-by, held container filled);
* every action costs one step; goal groups advance greedily in order.

min_steps is the macro-space minimum. The returned witness is the macro plan
compiled to engine actions, with deterministic corrections inserted where the
engine's view cone or view distance would hide the next target (turn to face,
then bounded forward moves). A feasible report's witness has been replayed
through the engine to evaluator success within the budget.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from ..engine.actions import Action
from ..engine.state import StateView, WorldState, capture_view, initial_state
from ..engine.transition import apply_action
from ..engine.visibility import NEAR_REVEAL_M, VIEW_DISTANCE_M, is_visible
from ..geometry import angle_diff_deg, bearing_deg, signed_angle_delta
from ..scene.model import AffordanceType, SceneGraph
from ..tasks.goals import GoalSpec, GoalTracker, group_satisfied

MISSING_CLASS = "MissingClass"
NO_PLAN_WITHIN_BUDGET = "NoPlanWithinBudget"
REPLAY_FAILED = "WitnessReplayFailed"

_HELD = "__held__"


@dataclass
class FeasibilityReport:
    feasible: bool
    min_steps: int | None = None
    witness: list[Action] | None = None
    rooms_visited: set[str] = field(default_factory=set)
    reasons: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"feasible": self.feasible, "min_steps": self.min_steps,
                "witness": [a.to_dict() for a in self.witness] if self.witness else None,
                "rooms_visited": sorted(self.rooms_visited),
                "reasons": list(self.reasons)}


@dataclass(frozen=True)
class _MacroAction:
    name: str
    target: str | None = None


class _AbstractSpace:
    """Transition relation over the projected state."""

    def __init__(self, world: WorldState, goal: GoalSpec,
                 restrict_room: str | None = None):
        self.goal = goal
        self.restrict_room = restrict_room
        scene = world.scene
        relevant = set()
        for cls in sorted(goal.distinct_classes()):
            for obj in scene.objects_of_class(cls):
                relevant.add(obj.id)
        for group in goal.groups:
            for pred in group:
                if pred.object_id and scene.object(pred.object_id) is not None:
                    relevant.add(pred.object_id)
        needs_fluid = any(
            (p.kind == "state_equals" and p.key == "is_filled")
            for group in goal.groups for p in group)
        if needs_fluid:
            for obj in scene.objects:
                if obj.obj_class.is_fluid_source:
                    relevant.add(obj.id)
        if world.holding is not None:
            relevant.add(world.holding)
        self.ids = sorted(relevant)
        self.info = {}
        for oid in self.ids:
            obj = scene.object(oid)
            self.info[oid] = {
                "class": obj.class_name,
                "affordance": obj.affordance,
                "fluid_source": obj.obj_class.is_fluid_source,
                "portable": obj.obj_class.portable,
            }
        useful_rooms = {scene.object(oid).room for oid in self.ids
                        if scene.object(oid).room is not None}
        start_room = world.current_room
        if start_room is not None:
            useful_rooms.add(start_room.id)
        if restrict_room is not None:
            useful_rooms = {restrict_room}
        self.rooms = sorted(useful_rooms)

    def initial(self, world: WorldState) -> tuple:
        room = world.current_room
        objstates = []
        for oid in self.ids:
            obj = world.scene.object(oid)
            room_of = _HELD if oid == world.holding else obj.room
            objstates.append((room_of,
                              obj.states.get("on_top_of"),
                              obj.states.get("is_open"),
                              obj.states.get("is_on"),
                              obj.states.get("is_filled")))
        near = None
        if room is not None:
            for oid in self.ids:
                obj = world.scene.object(oid)
                if oid != world.holding and obj.position is not None \
                        and obj.room == room.id and world.distance_to(obj) <= 1.5:
                    near = oid
                    break
        state = (room.id if room else self.rooms[0], near, world.holding,
                 world.highlighted, tuple(objstates), 0)
        return self._advance_groups(state)

    # -- goal checking via a synthetic StateView -----------------------

    def _view(self, state: tuple) -> StateView:
        room, near, held, highlighted, objstates, _ = state
        objects = {}
        for oid, (room_of, top, is_open, is_on, is_filled) in zip(self.ids, objstates):
            states = {}
            if top is not None or self.info[oid]["portable"]:
                states["on_top_of"] = top
            if is_open is not None:
                states["is_open"] = is_open
            if is_on is not None:
                states["is_on"] = is_on
            if is_filled is not None:
                states["is_filled"] = is_filled
            in_reach = oid == near or oid == held
            objects[oid] = {
                "class": self.info[oid]["class"],
                "room": None if room_of == _HELD else room_of,
                "position": None if room_of == _HELD else ((0.0, 0.0) if in_reach else (99.0, 99.0)),
                "states": states,
            }
        return StateView(step=0, agent_room=room, agent_position=(0.0, 0.0),
                         holding=held, highlighted=highlighted, objects=objects)

    def _advance_groups(self, state: tuple) -> tuple:
        done = state[5]
        groups = self.goal.groups
        view = self._view(state)
        while done < len(groups) and group_satisfied(groups[done], view):
            done += 1
        if done != state[5]:
            state = state[:5] + (done,)
        return state

    def solved(self, state: tuple) -> bool:
        return state[5] == len(self.goal.groups)

    # -- successors ----------------------------------------------------

    def successors(self, state: tuple):
        room, near, held, highlighted, objstates, done = state
        st = {oid: s for oid, s in zip(self.ids, objstates)}

        def emit(action: _MacroAction, new_room=room, new_near=near,
                 new_held=held, new_highlighted=highlighted, updates=()):
            table = dict(st)
            for oid, value in updates:
                table[oid] = value
            nxt = (new_room, new_near, new_held, new_highlighted,
                   tuple(table[oid] for oid in self.ids), done)
            yield action, self._advance_groups(nxt)

        for target in self.rooms:
            if target != room and self.restrict_room is None:
                yield from emit(_MacroAction("move_to_room", target),
                                new_room=target, new_near=None)
        for oid in self.ids:
            room_of = st[oid][0]
            info = self.info[oid]
            if room_of == room and oid != held and oid != near:
                yield from emit(_MacroAction("move_to", oid), new_near=oid)
            stood_by = oid == near and room_of == room
            reachable = stood_by or oid == held
            if reachable and highlighted != oid:
                yield from emit(_MacroAction("highlight", oid), new_highlighted=oid)
            if stood_by:
                _, top, is_open, is_on, is_filled = st[oid]
                if info["affordance"] is AffordanceType.DOOR_CONTAINER:
                    if not is_open:
                        yield from emit(_MacroAction("open", oid),
                                        updates=[(oid, (room, top, True, is_on, is_filled))])
                    else:
                        yield from emit(_MacroAction("close", oid),
                                        updates=[(oid, (room, top, False, is_on, is_filled))])
                if info["affordance"] is AffordanceType.SWITCH:
                    if not is_on:
                        yield from emit(_MacroAction("turn_on", oid),
                                        updates=[(oid, (room, top, is_open, True, is_filled))])
                    else:
                        yield from emit(_MacroAction("turn_off", oid),
                                        updates=[(oid, (room, top, is_open, False, is_filled))])
                if info["portable"] and held is None:
                    yield from emit(_MacroAction("pick_up", oid), new_held=oid,
                                    updates=[(oid, (_HELD, None, None, None, st[oid][4]))])
                if info["affordance"] is AffordanceType.SURFACE and held is not None:
                    held_state = st[held]
                    yield from emit(_MacroAction("place_on", oid), new_held=None,
                                    updates=[(held, (room, oid, None, None, held_state[4]))])
                if (info["affordance"] is AffordanceType.CONTAINER_FLUID
                        and held is not None and held != oid
                        and self.info[held]["affordance"] is AffordanceType.CONTAINER_FLUID
                        and st[held][4]):
                    held_state = st[held]
                    target_state = st[oid]
                    yield from emit(
                        _MacroAction("pour", oid),
                        updates=[(held, held_state[:4] + (False,)),
                                 (oid, target_state[:4] + (True,))])
        if held is not None:
            held_state = st[held]
            yield from emit(_MacroAction("drop_held"), new_held=None,
                            updates=[(held, (room, None, held_state[2],
                                             held_state[3], held_state[4]))])
            if (self.info[held]["affordance"] is AffordanceType.CONTAINER_FLUID
                    and near is not None and self._source_running(near, st)):
                yield from emit(_MacroAction("fill", held),
                                updates=[(held, held_state[:4] + (True,))])

    def _source_running(self, oid: str, st: dict) -> bool:
        info = self.info[oid]
        if not info["fluid_source"]:
            return False
        if info["affordance"] is AffordanceType.SWITCH:
            return bool(st[oid][3])
        return True


def plan_macro(world: WorldState, goal: GoalSpec, budget: int,
               restrict_room: str | None = None) -> list[_MacroAction] | None:
    """Shortest macro plan satisfying the goal, or None within budget."""
    space = _AbstractSpace(world, goal, restrict_room=restrict_room)
    for cls in sorted(goal.distinct_classes()):
        if not world.scene.objects_of_class(cls):
            return None
    start = space.initial(world)
    if space.solved(start):
        return []
    seen = {start}
    queue = deque([(start, 0)])
    parents: dict[tuple, tuple] = {}
    while queue:
        state, depth = queue.popleft()
        if depth >= budget:
            continue
        for action, nxt in space.successors(state):
            if nxt in seen:
                continue
            seen.add(nxt)
            parents[nxt] = (state, action)
            if space.solved(nxt):
                plan = []
                cur = nxt
                while cur in parents:
                    cur, act = parents[cur]
                    plan.append(act)
                return plan[::-1]
            queue.append((nxt, depth + 1))
    return None


# -- witness compilation ---------------------------------------------------

def _face_and_approach(world: WorldState, target_id: str) -> list[Action] | None:
    """Deterministic corrections making target_id visible: turn to face it,
    then walk straight chunks until inside the reveal radius."""
    out: list[Action] = []
    for _ in range(12):
        if is_visible(world, target_id):
            return out
        obj = world.scene.object(target_id)
        if obj is None or obj.position is None:
            return None
        bearing = bearing_deg(world.agent.position, obj.position)
        delta = signed_angle_delta(world.agent.yaw, bearing)
        if angle_diff_deg(bearing, world.agent.yaw) > 5.0:
            name = "turn_right" if delta >= 0 else "turn_left"
            action = Action(name, amount=round(abs(delta), 1))
        else:
            reveal = NEAR_REVEAL_M if obj.obj_class.only_show_when_near else VIEW_DISTANCE_M
            gap = world.distance_to(obj) - (reveal - 0.5)
            if gap <= 0:
                return None
            action = Action("move_forward", amount=round(min(2.0, gap + 0.05), 3))
        result = apply_action(world, action)
        if not result.ok:
            return None
        out.append(action)
    return None


def compile_witness(world: WorldState, plan: list[_MacroAction],
                    goal: GoalSpec, budget: int) -> tuple[list[Action], set[str], int] | None:
    """Replay the macro plan on a cloned world, inserting visibility
    corrections. Returns (actions, rooms visited, steps) on evaluator
    success within budget, else None."""
    sim = world.clone()
    tracker = GoalTracker(goal)
    tracker.observe(capture_view(sim))
    actions: list[Action] = []
    rooms: set[str] = set()
    if sim.current_room is not None:
        rooms.add(sim.current_room.id)

    def run(action: Action) -> bool:
        result = apply_action(sim, action)
        actions.append(action)
        if sim.current_room is not None:
            rooms.add(sim.current_room.id)
        tracker.observe(capture_view(sim))
        return result.ok

    for macro in plan:
        if macro.name == "move_to_room":
            label = sim.scene.room(macro.target).label
            if not run(Action("move_to_room", target=label)):
                return None
            continue
        if macro.target is not None and macro.name != "fill":
            fixes = _face_and_approach(sim, macro.target)
            if fixes is None:
                return None
            for fix in fixes:
                actions.append(fix)
                tracker.observe(capture_view(sim))
        if not run(Action(macro.name, target=macro.target)):
            return None
        if tracker.satisfied:
            break
    if not tracker.satisfied or len(actions) > budget:
        return None
    return actions, rooms, len(actions)


def plan_and_compile(world: WorldState, goal: GoalSpec, budget: int,
                     restrict_room: str | None = None) -> FeasibilityReport:
    for cls in sorted(goal.distinct_classes()):
        if not world.scene.objects_of_class(cls):
            return FeasibilityReport(feasible=False,
                                     reasons=[f"{MISSING_CLASS}:{cls}"])
    for group in goal.groups:
        for pred in group:
            if pred.object_id and world.scene.object(pred.object_id) is None:
                return FeasibilityReport(
                    feasible=False, reasons=[f"{MISSING_CLASS}:{pred.object_id}"])
    plan = plan_macro(world, goal, budget, restrict_room=restrict_room)
    if plan is None:
        return FeasibilityReport(feasible=False, reasons=[NO_PLAN_WITHIN_BUDGET])
    compiled = compile_witness(world, plan, goal, budget)
    if compiled is None:
        return FeasibilityReport(feasible=False, min_steps=len(plan),
                                 reasons=[REPLAY_FAILED])
    actions, rooms, _ = compiled
    return FeasibilityReport(feasible=True, min_steps=len(plan),
                             witness=actions, rooms_visited=rooms)


def verify_feasibility(candidate, scene: SceneGraph, start_room: str,
                       budget: int = 60) -> FeasibilityReport:
    """Stage-3 stand-in: mechanical executability check with a replayable
    witness. `candidate` is anything carrying .task.goal (TaskCandidate) or a
    TaskSpec itself."""
    task = getattr(candidate, "task", candidate)
    world = initial_state(scene, start_room)
    return plan_and_compile(world, task.goal, budget)


def label_cross_room(task, scene: SceneGraph, start_room: str) -> bool:
    """True iff no witness plan can stay inside the start room."""
    from ..errors import InfeasibleTask

    world = initial_state(scene, start_room)
    unrestricted = plan_and_compile(world, task.goal, task.budget)
    if not unrestricted.feasible:
        raise InfeasibleTask(getattr(task, "task_id", "") or "unbound candidate")
    restricted = plan_and_compile(initial_state(scene, start_room), task.goal,
                                  task.budget, restrict_room=world.current_room.id)
    return not restricted.feasible
