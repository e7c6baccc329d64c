"""Interactive session server: one WebSocket connection drives one episode.

Wire frames are JSON SessionMessages {"kind", "seq", "payload"}. The client
sends hello/action/annotation; the server replies with hello (scene summary),
observation, result, done, annotation (persistence ack) and error. Sequence
numbers must strictly increase per sender; a malformed or out-of-order frame
ends the session with an error frame and the partial trace is persisted.
"""

from __future__ import annotations

import asyncio
import json
import time
from pathlib import Path

import websockets

from ..engine.actions import CATEGORY_OF, Action
from ..engine.grounding import check_grounding
from ..engine.state import ActionResult, capture_view, initial_state, state_hash
from ..engine.transition import apply_action
from ..harness.observation import NoiseConfig, perceive
from ..scene.model import SceneGraph
from ..tasks.goals import GoalTracker
from ..tasks.records import BUDGET_EXHAUSTED, EpisodeRecord, StepRecord
from ..tasks.spec import TaskSpec, TaskSuite
from .traces import write_trace

PROTOCOL_VERSION = 1

SERVER_KINDS = ("hello", "observation", "result", "annotation", "done", "error")
CLIENT_KINDS = ("hello", "action", "annotation")
ANNOTATION_FIELDS = ("executable", "clear", "reachable", "notes")


def scene_summary(scene: SceneGraph) -> dict:
    return {
        "rooms": [{"id": r.id, "label": r.label,
                   "region": [r.region.x0, r.region.y0, r.region.x1, r.region.y1],
                   "entry_point": list(r.entry_point)} for r in scene.rooms],
        "doorways": [{"rooms": [d.room_a, d.room_b],
                      "segment": [list(d.a), list(d.b)]} for d in scene.doorways],
        "room_options": scene.room_labels(),
        # class -> affordance, for client-side action palette pre-checks
        "affordances": {c.class_name: c.affordance.value for c in scene.catalog},
    }


class ProtocolError(Exception):
    pass


class _Session:
    def __init__(self, server: "SessionServer", websocket):
        self.server = server
        self.ws = websocket
        self.seq_out = 0
        self.last_seq_in = -1
        self.steps: list[StepRecord] = []
        self.task: TaskSpec | None = None
        self.scene: SceneGraph | None = None
        self.world = None
        self.tracker: GoalTracker | None = None
        self.outcome: dict | None = None
        self.annotation: dict | None = None
        self.session_id = f"session_{int(time.time() * 1000)}_{id(websocket) & 0xffff}"

    async def send(self, kind: str, payload: dict) -> None:
        self.seq_out += 1
        await self.ws.send(json.dumps({"kind": kind, "seq": self.seq_out,
                                       "payload": payload}))

    async def recv(self, expected: tuple[str, ...]) -> dict:
        raw = await self.ws.recv()
        try:
            frame = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ProtocolError(f"unparsable frame: {exc}") from exc
        kind = frame.get("kind")
        if kind not in CLIENT_KINDS:
            raise ProtocolError(f"unknown client frame kind {kind!r}")
        if kind not in expected:
            raise ProtocolError(f"unexpected {kind!r}, wanted one of {expected}")
        seq = frame.get("seq")
        if not isinstance(seq, int) or seq <= self.last_seq_in:
            raise ProtocolError(f"sequence number must increase (got {seq!r})")
        self.last_seq_in = seq
        return frame

    def _observation_payload(self) -> dict:
        obs = perceive(self.world, NoiseConfig(), self.world.step + 1,
                       last_action_result=self.steps[-1].result if self.steps else None,
                       last_grounding=self.steps[-1].grounding if self.steps else None)
        goal_classes = self.task.goal.distinct_classes()
        markers = []
        for entry in obs.visible:
            instance = self.world.object(entry["id"])
            markers.append({
                "id": entry["id"], "class": entry["class"],
                "position": list(instance.position) if instance.position else None,
                "goal_relevant": entry["class"] in goal_classes,
            })
        return {
            "observation": obs.to_dict(),
            "agent": {"position": list(self.world.agent.position),
                      "yaw": self.world.agent.yaw,
                      "pitch": self.world.agent.pitch},
            "markers": markers,
            "group_steps": list(self.tracker.group_steps),
            "state_hash": state_hash(self.world),
        }, obs

    async def run(self) -> None:
        hello = await self.recv(("hello",))
        task_id = (hello.get("payload") or {}).get("task_id")
        task = self.server.tasks.get(task_id)
        if task is None:
            raise ProtocolError(f"unknown task {task_id!r}")
        self.task = task
        self.scene = self.server.scenes[task.apartment]
        self.world = initial_state(self.scene, task.start_room)
        self.tracker = GoalTracker(task.goal)
        self.tracker.observe(capture_view(self.world))
        await self.send("hello", {
            "protocol_version": PROTOCOL_VERSION,
            "task": task.to_dict(),
            "scene_summary": scene_summary(self.scene),
        })

        while self.world.step < task.budget:
            payload, obs = self._observation_payload()
            await self.send("observation", payload)
            frame = await self.recv(("action", "annotation"))
            if frame["kind"] == "annotation":
                # early abandonment: record the annotation, stop the episode
                await self._accept_annotation(frame)
                self.outcome = {"status": "failure", "reason": "AgentAborted"}
                break
            body = frame.get("payload") or {}
            name = body.get("name")
            if name not in CATEGORY_OF:
                raise ProtocolError(f"unknown action name {name!r}")
            action = Action(name=name, target=body.get("target"),
                            amount=float(body["amount"])
                            if body.get("amount") is not None else None)
            violation = check_grounding(self.world, action, obs.room_options)
            if violation is not None:
                self.world.step += 1
                result = ActionResult(ok=False, reason=violation.kind,
                                      message=violation.detail)
                grounding: object = violation.to_dict()
            else:
                result = apply_action(self.world, action)
                grounding = "ok"
            satisfied = self.tracker.observe(capture_view(self.world))
            self.steps.append(StepRecord(
                step=self.world.step, observation=obs.to_dict(), memory=None,
                action=action.to_dict(), result=result.to_dict(),
                grounding=grounding))
            await self.send("result", {
                "action": action.to_dict(), "result": result.to_dict(),
                "grounding": grounding, "state_hash": state_hash(self.world),
                "satisfied": satisfied, "group_steps": list(self.tracker.group_steps),
            })
            if satisfied:
                self.outcome = {"status": "success", "at_step": self.world.step}
                break
        if self.outcome is None:
            self.outcome = {"status": "failure", "reason": BUDGET_EXHAUSTED}
        self.persist()  # episode is final here; re-persisted with annotation later
        await self.send("done", {"outcome": self.outcome,
                                 "final_state_hash": state_hash(self.world),
                                 "steps": len(self.steps)})
        if self.annotation is None:
            try:
                frame = await asyncio.wait_for(self.recv(("annotation",)),
                                               timeout=self.server.annotation_timeout)
                await self._accept_annotation(frame)
            except (asyncio.TimeoutError, websockets.ConnectionClosed):
                pass

    async def _accept_annotation(self, frame: dict) -> None:
        body = frame.get("payload") or {}
        record = {field: body.get(field) for field in ANNOTATION_FIELDS}
        for flag in ("executable", "clear", "reachable"):
            if not isinstance(record[flag], bool):
                raise ProtocolError(f"annotation field {flag!r} must be boolean")
        record["notes"] = str(record["notes"] or "")
        record["task_id"] = self.task.task_id if self.task else None
        record["session_id"] = self.session_id
        self.annotation = record
        self.server.persist_annotation(self.session_id, record)
        await self.send("annotation", record)

    def persist(self) -> None:
        if self.task is None or self.world is None:
            return
        record = EpisodeRecord(
            task_id=self.task.task_id, seed=0, policy="remote-session",
            apartment=self.task.apartment, steps=self.steps,
            outcome=self.outcome or {"status": "failure",
                                     "reason": "SessionAborted"},
            final_state_hash=state_hash(self.world),
            group_steps=list(self.tracker.group_steps) if self.tracker else [],
            meta={"session_id": self.session_id,
                  "annotation": self.annotation})
        self.server.persist_trace(self.session_id, record, self.task, self.scene)


class SessionServer:
    """One episode per connection; sessions are independent and concurrent."""

    def __init__(self, scenes: dict[str, SceneGraph], suite: TaskSuite,
                 out_dir: str | Path, annotation_timeout: float = 5.0):
        self.scenes = scenes
        self.tasks = suite.by_id()
        self.out_dir = Path(out_dir)
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self.annotation_timeout = annotation_timeout
        self._server = None

    def persist_trace(self, session_id: str, record: EpisodeRecord,
                      task: TaskSpec, scene: SceneGraph) -> None:
        write_trace(self.out_dir / f"{session_id}.jsonl", record, task, scene)

    def persist_annotation(self, session_id: str, record: dict) -> None:
        path = self.out_dir / f"{session_id}.annotation.json"
        path.write_text(json.dumps(record, sort_keys=True, indent=1) + "\n")

    async def _handler(self, websocket) -> None:
        session = _Session(self, websocket)
        try:
            await session.run()
        except ProtocolError as exc:
            try:
                await session.send("error", {"detail": str(exc)})
            except websockets.ConnectionClosed:
                pass
        except websockets.ConnectionClosed:
            pass
        finally:
            session.persist()
            await websocket.close()

    async def start(self, host: str = "127.0.0.1", port: int = 0) -> int:
        self._server = await websockets.serve(self._handler, host, port)
        return self._server.sockets[0].getsockname()[1]

    async def stop(self) -> None:
        if self._server is not None:
            self._server.close()
            await self._server.wait_closed()

    async def serve_forever(self, host: str, port: int) -> None:
        actual = await self.start(host, port)
        print(f"session server listening on ws://{host}:{actual}", flush=True)
        await asyncio.Future()
