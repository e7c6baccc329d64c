"""The agent-agnostic episode loop.

Per step: perceive -> memory update -> summarize -> decide -> grounding check
-> apply -> goal evaluation. Grounding violations consume a step without
touching the world (beyond the step counter) and surface to the policy in
the next observation. The loop stops at the first success, the step budget,
or a policy abort.
"""

from __future__ import annotations

import zlib
from typing import Callable

from ..engine.grounding import check_grounding
from ..engine.state import ActionResult, capture_view, initial_state, state_hash
from ..engine.transition import apply_action
from ..errors import PolicyError
from ..scene.model import SceneGraph
from ..tasks.goals import GoalTracker
from ..tasks.records import (AGENT_ABORTED, BUDGET_EXHAUSTED, EpisodeRecord,
                             StepRecord)
from ..tasks.spec import TaskSpec
from .memory import MemoryOutputs, init_memory, memory_update, summarize_memory
from .observation import NoiseConfig, perceive


def _episode_noise(noise: NoiseConfig, task_id: str, seed: int) -> NoiseConfig:
    eff = zlib.crc32(f"{noise.seed}|{task_id}|{seed}".encode()) & 0x7FFFFFFF
    return NoiseConfig(perception_drop=noise.perception_drop,
                       memory_drop=noise.memory_drop, seed=eff)


def run_episode(scene: SceneGraph, task: TaskSpec, policy,
                noise: NoiseConfig = NoiseConfig(), seed: int = 0, *,
                summarize_fn: Callable | None = None,
                suppress_target_room: bool = False,
                policy_name: str = "") -> EpisodeRecord:
    """Run one episode; fully determined by (scene, task, policy, noise,
    seed) for deterministic policies."""
    world = initial_state(scene, task.start_room, seed=seed)
    noise = _episode_noise(noise, task.task_id, seed)
    memory = init_memory(scene)
    tracker = GoalTracker(task.goal)
    tracker.observe(capture_view(world))
    summarize = summarize_fn or summarize_memory
    if hasattr(policy, "bind_world"):
        policy.bind_world(lambda: world)

    goal_rooms = sorted({o.room for cls in task.goal.distinct_classes()
                         for o in scene.objects_of_class(cls) if o.room})
    steps: list[StepRecord] = []
    outcome = {"status": "failure", "reason": BUDGET_EXHAUSTED}
    last_result_dict: dict | None = None
    last_grounding: object = None
    last_action = None

    while world.step < task.budget:
        step_no = world.step + 1
        obs = perceive(world, noise, step_no,
                       last_action_result=last_result_dict,
                       last_grounding=last_grounding)
        memory = memory_update(memory, obs, last_action, noise, step_no)
        if hasattr(policy, "on_progress"):
            policy.on_progress(tracker.group_steps)
        mem_out = summarize(memory, task, list(tracker.group_steps))
        if suppress_target_room:
            mem_out = MemoryOutputs(historical_summary=mem_out.historical_summary,
                                    target_room=obs.room_label or mem_out.target_room)
        try:
            action = policy.decide(task.instruction, obs, mem_out)
        except PolicyError as exc:
            outcome = {"status": "failure", "reason": AGENT_ABORTED,
                       "detail": str(exc)}
            break
        violation = check_grounding(world, action, obs.room_options)
        if violation is not None:
            world.step += 1
            result = ActionResult(ok=False, reason=violation.kind,
                                  message=violation.detail)
            grounding: object = violation.to_dict()
        else:
            result = apply_action(world, action)
            grounding = "ok"
        satisfied = tracker.observe(capture_view(world))
        tokens = policy.take_tokens() if hasattr(policy, "take_tokens") \
            else {"prompt": 0, "completion": 0}
        steps.append(StepRecord(step=world.step, observation=obs.to_dict(),
                                memory=mem_out.to_dict(), action=action.to_dict(),
                                result=result.to_dict(), grounding=grounding,
                                tokens=tokens))
        last_result_dict = result.to_dict()
        last_grounding = grounding
        last_action = action
        if satisfied:
            outcome = {"status": "success", "at_step": world.step}
            break

    return EpisodeRecord(
        task_id=task.task_id, seed=seed,
        policy=policy_name or type(policy).__name__,
        apartment=task.apartment, steps=steps, outcome=outcome,
        final_state_hash=state_hash(world),
        noise={"perception_drop": noise.perception_drop,
               "memory_drop": noise.memory_drop, "seed": noise.seed},
        group_steps=list(tracker.group_steps),
        meta={"goal_rooms": goal_rooms, "scenario": task.scenario,
              "start_room": task.start_room,
              "suppress_target_room": suppress_target_room},
    )
