"""Episode trace files: line-delimited JSON, one step per line.

Frame layout: a header line, one line per step, and an end line carrying the
outcome and final state hash. A file whose last line is missing, unparsable,
or not an end frame is truncated; readers must surface that, never silently
aggregate it.
"""

from __future__ import annotations

import json
from pathlib import Path

from ..engine.actions import Action
from ..engine.state import initial_state, state_hash
from ..engine.transition import apply_action
from ..errors import TraceError
from ..scene.io import scene_from_dict, scene_to_dict
from ..scene.model import SceneGraph
from ..tasks.records import EpisodeRecord, StepRecord
from ..tasks.spec import TaskSpec

TRACE_FORMAT_VERSION = 1


def write_trace(path: str | Path, record: EpisodeRecord, task: TaskSpec,
                scene: SceneGraph) -> None:
    header = {"kind": "header", "format_version": TRACE_FORMAT_VERSION,
              "task": task.to_dict(), "scene": scene_to_dict(scene),
              **record.header_dict()}
    with open(path, "w") as fh:
        fh.write(json.dumps(header, sort_keys=True) + "\n")
        for step in record.steps:
            fh.write(json.dumps({"kind": "step", **step.to_dict()},
                                sort_keys=True) + "\n")
        fh.write(json.dumps({"kind": "end", **record.end_dict()},
                            sort_keys=True) + "\n")


def read_trace(path: str | Path) -> tuple[dict, EpisodeRecord]:
    """Parse a trace file; raises TraceError on any framing defect."""
    lines = Path(path).read_text().splitlines()
    if not lines:
        raise TraceError(f"{path}: empty trace")
    try:
        frames = [json.loads(line) for line in lines]
    except json.JSONDecodeError as exc:
        raise TraceError(f"{path}: unparsable line ({exc})") from exc
    header, *rest = frames
    if header.get("kind") != "header":
        raise TraceError(f"{path}: first frame is not a header")
    if not rest or rest[-1].get("kind") != "end":
        raise TraceError(f"{path}: truncated (no end frame)")
    end = rest[-1]
    steps = [StepRecord.from_dict(f) for f in rest[:-1] if f.get("kind") == "step"]
    if len(steps) != len(rest) - 1:
        raise TraceError(f"{path}: unexpected frame kinds")
    if len(steps) != end.get("steps"):
        raise TraceError(f"{path}: end frame step count mismatch")
    record = EpisodeRecord(
        task_id=header["task"]["task_id"], seed=header["seed"],
        policy=header["policy"], apartment=header["apartment"], steps=steps,
        outcome=end["outcome"], final_state_hash=end["final_state_hash"],
        noise=header.get("noise", {}), group_steps=end.get("group_steps", []),
        meta=header.get("meta", {}))
    return header, record


def trace_task(header: dict) -> TaskSpec:
    return TaskSpec.from_dict(header["task"])


def trace_scene(header: dict) -> SceneGraph:
    return scene_from_dict(header["scene"])


def replay_trace(path: str | Path) -> tuple[bool, str, str]:
    """Re-execute a trace's recorded actions and compare final state hashes.

    Returns (match, recorded hash, replayed hash). Grounding-violation steps
    consumed a step without touching the world; replay mirrors that.
    """
    header, record = read_trace(path)
    scene = trace_scene(header)
    task = trace_task(header)
    world = initial_state(scene, task.start_room, seed=record.seed)
    for step in record.steps:
        if step.grounding != "ok":
            world.step += 1
            continue
        apply_action(world, Action.from_dict(step.action))
    replayed = state_hash(world)
    return replayed == record.final_state_hash, record.final_state_hash, replayed
