import json
import random

import pytest

from homebench.engine import apply_action, capture_view, initial_state
from homebench.errors import ExhaustedBindings, InfeasibleTask
from homebench.scene import GeneratorConfig, generate_apartment
from homebench.tasks import GoalPredicate, GoalSpec, GoalTracker, Tier
from homebench.taskgen import (SuiteConfig, VARIANTS, build_suite,
                               extract_scene_graph, generate_candidates,
                               keyword_goal_classes, label_cross_room,
                               plan_and_compile, verify_feasibility)

from .conftest import micro_scene
from .oracles import oracle_min_steps


# -- planning graph -----------------------------------------------------------

def test_graph_mirrors_scene_counts():
    scene = micro_scene()
    graph = extract_scene_graph(scene)
    assert len(graph.rooms) == len(scene.rooms)
    assert len(graph.objects) == len(scene.objects)
    assert len(graph.placement_edges) == len(scene.objects)
    assert len(graph.connectivity_edges) == len(scene.doorways)


def test_graph_reachability_matches_room_paths():
    from homebench.scene import shortest_room_path

    import networkx as nx

    scene = generate_apartment(GeneratorConfig(seed=21))
    graph = extract_scene_graph(scene)
    g = nx.Graph(graph.connectivity_edges)
    g.add_nodes_from(r["id"] for r in graph.rooms)
    for a in g.nodes:
        for b in g.nodes:
            hops = len(shortest_room_path(scene, a, b)) - 1
            assert nx.shortest_path_length(g, a, b) == hops


# -- candidate generation -------------------------------------------------------

def test_generation_deterministic():
    scene = generate_apartment(GeneratorConfig(seed=9))
    graph = extract_scene_graph(scene)
    a = generate_candidates(graph, Tier.BASIC, 2, 8, seed=5)
    b = generate_candidates(graph, Tier.BASIC, 2, 8, seed=5)
    assert [(c.template_id, c.bound_objects, c.task.instruction) for c in a] == \
           [(c.template_id, c.bound_objects, c.task.instruction) for c in b]


def test_basic_instruction_names_every_bound_class():
    scene = generate_apartment(GeneratorConfig(seed=9))
    graph = extract_scene_graph(scene)
    for scenario in (1, 2, 3, 4):
        for cand in generate_candidates(graph, Tier.BASIC, scenario, 6, seed=3):
            for oid in cand.bound_objects:
                class_name = oid.rsplit("_", 1)[0]
                assert class_name in cand.task.instruction


def test_reasoning_candidates_single_room():
    scene = generate_apartment(GeneratorConfig(seed=9))
    graph = extract_scene_graph(scene)
    node_room = {o.id: o.room for o in graph.objects}
    for scenario in (5, 6, 7):
        for cand in generate_candidates(graph, Tier.REASONING, scenario, 6, seed=3):
            rooms = {node_room[oid] for oid in cand.bound_objects}
            assert rooms == {cand.task.start_room}


def test_long_horizon_constraints():
    scene = generate_apartment(GeneratorConfig(seed=9))
    graph = extract_scene_graph(scene)
    for scenario in (8, 9, 10):
        for cand in generate_candidates(graph, Tier.LONG_HORIZON, scenario, 6, seed=3):
            goal = cand.task.goal
            assert len(goal.distinct_classes()) >= 3
            assert goal.state_changing_count() >= 2


def test_instruction_references_only_present_classes():
    scene = generate_apartment(GeneratorConfig(seed=31))
    graph = extract_scene_graph(scene)
    present = {o.class_name for o in graph.objects}
    for tier, scenarios in ((Tier.BASIC, (1, 2, 3, 4)),
                            (Tier.REASONING, (5, 6, 7)),
                            (Tier.LONG_HORIZON, (8, 9, 10))):
        for sid in scenarios:
            for cand in generate_candidates(graph, tier, sid, 4, seed=1):
                for cls in cand.task.goal.distinct_classes():
                    assert cls in present


def test_text_generator_hook_replaces_wording_only():
    scene = generate_apartment(GeneratorConfig(seed=9))
    graph = extract_scene_graph(scene)
    def shout(context):
        return context["default_text"].upper()
    plain = generate_candidates(graph, Tier.BASIC, 3, 4, seed=6)
    loud = generate_candidates(graph, Tier.BASIC, 3, 4, seed=6,
                               text_generator=shout)
    for a, b in zip(plain, loud):
        assert b.task.instruction == a.task.instruction.upper()
        assert a.task.goal == b.task.goal


def test_exhausted_bindings_on_empty_scene():
    scene = micro_scene()
    scene.objects = [o for o in scene.objects if o.affordance.value != "switch"]
    scene.__post_init__()
    graph = extract_scene_graph(scene)
    with pytest.raises(ExhaustedBindings):
        generate_candidates(graph, Tier.BASIC, 3, 4, seed=0)


def test_keyword_bank_self_consistent():
    # every vague utterance resolves to its own phrase entry
    for scenario in (5, 6, 7):
        for variant in VARIANTS[scenario]:
            specs = keyword_goal_classes(variant.text)
            assert specs is not None, variant.id
            slot_classes = {s.name: s.classes for s in variant.slots}
            expected = []
            for group in variant.groups:
                for kind, slot, key, value, _ in group:
                    expected.append((kind, slot_classes[slot], key, value))
            assert specs == expected, variant.id


def test_unmatched_utterance_returns_none():
    assert keyword_goal_classes("please align the warp core") is None


# -- feasibility solver ---------------------------------------------------------

def test_missing_class_is_infeasible():
    scene = micro_scene()
    goal = GoalSpec(groups=((GoalPredicate.state_equals("jacuzzi", "is_on", True),),))
    world = initial_state(scene, "room_a")
    report = plan_and_compile(world, goal, 60)
    assert not report.feasible
    assert any(r.startswith("MissingClass") for r in report.reasons)


def test_lamp_in_agent_room_two_macro_steps():
    scene = micro_scene()
    goal = GoalSpec(groups=((GoalPredicate.state_equals("lamp", "is_on", True),),))
    world = initial_state(scene, "room_b")
    world.agent.position = (7.5, 3.5)  # same room, out of interaction range
    report = plan_and_compile(world, goal, 60)
    assert report.feasible and report.min_steps == 2  # move_to + turn_on
    check = initial_state(scene, "room_b")
    check.agent.position = (7.5, 3.5)
    assert oracle_min_steps(check, goal, 60) == 2


def test_cross_room_goal_starts_with_room_move():
    scene = micro_scene()
    goal = GoalSpec(groups=((GoalPredicate.state_equals("lamp", "is_on", True),),))
    world = initial_state(scene, "room_a")
    report = plan_and_compile(world, goal, 60)
    assert report.feasible
    assert report.witness[0].name == "move_to_room"
    assert len(report.rooms_visited) >= 2
    assert report.min_steps == oracle_min_steps(world, goal, 60)


def test_witness_replays_to_goal_satisfaction():
    scene = micro_scene()
    goal = GoalSpec(groups=(
        (GoalPredicate.state_equals("faucet", "is_on", True),),
        (GoalPredicate.state_equals("cup", "is_filled", True),),
        (GoalPredicate.placed_on("pillow", "table"),),
    ))
    world = initial_state(scene, "room_c")
    report = plan_and_compile(world, goal, 60)
    assert report.feasible
    sim = world.clone()
    tracker = GoalTracker(goal)
    tracker.observe(capture_view(sim))
    for action in report.witness:
        result = apply_action(sim, action)
        assert result.ok, (action, result.reason)
        tracker.observe(capture_view(sim))
    assert tracker.satisfied


def _random_small_instance(rng):
    scene = micro_scene()
    # random initial toggles widen the state variety
    for obj in scene.objects:
        if "is_on" in obj.states:
            obj.states["is_on"] = rng.random() < 0.4
        if "is_open" in obj.states:
            obj.states["is_open"] = rng.random() < 0.4
        if "is_filled" in obj.states:
            obj.states["is_filled"] = rng.random() < 0.3
    makers = [
        lambda: GoalSpec(groups=((GoalPredicate.state_equals("lamp", "is_on", True),),)),
        lambda: GoalSpec(groups=((GoalPredicate.state_equals("fridge", "is_open", True),),
                                 (GoalPredicate.state_equals("lamp", "is_on", True),))),
        lambda: GoalSpec(groups=((GoalPredicate.placed_on("pillow", "table"),),)),
        lambda: GoalSpec(groups=((GoalPredicate.inspected("bed"),),
                                 (GoalPredicate.state_equals("fridge", "is_open", False),))),
        lambda: GoalSpec(groups=((GoalPredicate.state_equals("cup", "is_filled", True),),)),
        lambda: GoalSpec(groups=((GoalPredicate.holding("cup"),),
                                 (GoalPredicate.state_equals("bowl", "is_filled", True),))),
        lambda: GoalSpec(groups=((GoalPredicate.state_equals("faucet", "is_on", True),),
                                 (GoalPredicate.state_equals("cup", "is_filled", True),),
                                 (GoalPredicate.placed_on("cup", "table"),))),
    ]
    goal = rng.choice(makers)()
    start = rng.choice(["room_a", "room_b", "room_c", "room_d"])
    return scene, goal, start


def test_solver_matches_independent_bfs_oracle():
    rng = random.Random(99)
    checked = 0
    while checked < 12:
        scene, goal, start = _random_small_instance(rng)
        world = initial_state(scene, start)
        report = plan_and_compile(world, goal, 60)
        expected = oracle_min_steps(initial_state(scene, start), goal, 60)
        if expected is None or expected == 0:
            assert not report.feasible or report.min_steps == 0
            continue
        assert report.feasible, (goal, start)
        assert report.min_steps == expected, (goal, start)
        checked += 1


# -- cross-room labeling ----------------------------------------------------------

def _task_for(goal, start_room):
    return type("Draft", (), {"goal": goal, "budget": 60, "task_id": "t"})()


def test_cross_room_label_false_when_goal_local():
    scene = micro_scene()
    goal = GoalSpec(groups=((GoalPredicate.state_equals("fridge", "is_open", True),),))
    assert label_cross_room(_task_for(goal, "room_a"), scene, "room_a") is False


def test_cross_room_label_true_when_goal_elsewhere():
    scene = micro_scene()
    goal = GoalSpec(groups=((GoalPredicate.state_equals("lamp", "is_on", True),),))
    assert label_cross_room(_task_for(goal, "room_a"), scene, "room_a") is True


def test_cross_room_label_infeasible_task_raises():
    scene = micro_scene()
    goal = GoalSpec(groups=((GoalPredicate.state_equals("jacuzzi", "is_on", True),),))
    with pytest.raises(InfeasibleTask):
        label_cross_room(_task_for(goal, "room_a"), scene, "room_a")


def test_labels_agree_with_witness_room_sets(suite300, scenes5):
    suite, verification = suite300
    rng = random.Random(4)
    for task in rng.sample(suite.tasks, 20):
        report = verification[task.task_id]
        if task.cross_room:
            assert len(report.rooms_visited) >= 2, task.task_id
        else:
            restricted = plan_and_compile(
                initial_state(scenes5[task.apartment], task.start_room),
                task.goal, task.budget,
                restrict_room=scenes5[task.apartment].resolve_room(task.start_room).id)
            assert restricted.feasible, task.task_id


# -- suite assembly ----------------------------------------------------------------

def test_small_suite_counts_and_determinism(scenes5):
    config = SuiteConfig(tier_counts={Tier.BASIC: 8, Tier.REASONING: 6,
                                      Tier.LONG_HORIZON: 6},
                         cross_room_fraction={Tier.BASIC: 0.375,
                                              Tier.REASONING: 0.0,
                                              Tier.LONG_HORIZON: 0.5})
    suite1, _ = build_suite(sorted(scenes5.items()), config, seed=77)
    suite2, _ = build_suite(sorted(scenes5.items()), config, seed=77)
    assert json.dumps(suite1.to_dict()) == json.dumps(suite2.to_dict())
    tiers = {}
    crosses = {}
    for task in suite1.tasks:
        tiers[task.tier] = tiers.get(task.tier, 0) + 1
        crosses[task.tier] = crosses.get(task.tier, 0) + int(task.cross_room)
    assert tiers == {Tier.BASIC: 8, Tier.REASONING: 6, Tier.LONG_HORIZON: 6}
    assert crosses[Tier.REASONING] == 0
    assert crosses[Tier.BASIC] == 3 and crosses[Tier.LONG_HORIZON] == 3


def test_every_emitted_task_verifies(suite300, scenes5):
    suite, _ = suite300
    rng = random.Random(12)
    for task in rng.sample(suite.tasks, 15):
        report = verify_feasibility(task, scenes5[task.apartment],
                                    task.start_room, task.budget)
        assert report.feasible, task.task_id
