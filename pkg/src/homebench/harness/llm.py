"""Generic chat-completion client and the LLM-backed probes.

The wire format is the common chat-completions shape: POST
{base_url}/chat/completions with model/messages/temperature, bearer key from
an environment variable. The planner contract is a single JSON object
{"action": ..., "target": ...}; the memory contract is {"memory": ...,
"target_room": ...}. Malformed replies earn up to two corrective retries,
then PolicyError (the episode runner records AgentAborted). Object ids not
in the visible list are rejected locally before reaching the engine.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import requests

from ..engine.actions import (ALL_ACTIONS, AMOUNT_ACTIONS,
                              OBJECT_TARGET_ACTIONS, ROOM_TARGET_ACTIONS,
                              Action)
from ..errors import EndpointError, PolicyError
from ..tasks.spec import TaskSpec
from .memory import MemoryOutputs, MemoryState
from .observation import Observation

MAX_FORMAT_RETRIES = 2


@dataclass
class EndpointConfig:
    base_url: str
    model: str
    api_key_env: str = "HOMEBENCH_API_KEY"
    timeout_s: float = 60.0
    extra_headers: dict = field(default_factory=dict)

    @classmethod
    def from_file(cls, path: str | Path) -> "EndpointConfig":
        data = json.loads(Path(path).read_text())
        return cls(base_url=data["base_url"], model=data["model"],
                   api_key_env=data.get("api_key_env", "HOMEBENCH_API_KEY"),
                   timeout_s=float(data.get("timeout_s", 60.0)),
                   extra_headers=dict(data.get("extra_headers", {})))


def chat_complete(config: EndpointConfig, messages: list[dict],
                  temperature: float = 0.0) -> dict:
    """One chat-completion round trip. Returns {"text", "prompt_tokens",
    "completion_tokens"}; raises EndpointError on transport or shape
    problems."""
    headers = {"Content-Type": "application/json", **config.extra_headers}
    key = os.environ.get(config.api_key_env, "")
    if key:
        headers["Authorization"] = f"Bearer {key}"
    url = config.base_url.rstrip("/") + "/chat/completions"
    try:
        response = requests.post(
            url, headers=headers, timeout=config.timeout_s,
            json={"model": config.model, "messages": messages,
                  "temperature": temperature})
        response.raise_for_status()
        payload = response.json()
        text = payload["choices"][0]["message"]["content"]
        usage = payload.get("usage", {})
    except (requests.RequestException, KeyError, IndexError, ValueError) as exc:
        raise EndpointError(f"chat completion failed: {exc}") from exc
    return {"text": text,
            "prompt_tokens": int(usage.get("prompt_tokens", 0)),
            "completion_tokens": int(usage.get("completion_tokens", 0))}


def _load_prompt(name: str, prompts_dir: str | Path | None) -> str:
    if prompts_dir is not None:
        return (Path(prompts_dir) / name).read_text()
    return resources.files("homebench.harness").joinpath(
        f"prompts/{name}").read_text()


_JSON_RE = re.compile(r"\{.*\}", re.DOTALL)


def extract_json(text: str) -> dict:
    match = _JSON_RE.search(text)
    if match is None:
        raise ValueError("no JSON object in reply")
    return json.loads(match.group(0))


def parse_planner_reply(text: str, visible_ids: list[str],
                        room_options: list[str]) -> Action:
    """Validate the planner output contract; raises ValueError with an
    explanation suitable for a corrective retry message."""
    data = extract_json(text)
    name = data.get("action")
    if name not in ALL_ACTIONS:
        raise ValueError(f"unknown action {name!r}")
    target = data.get("target")
    amount = data.get("amount")
    if name in OBJECT_TARGET_ACTIONS:
        if target not in visible_ids:
            raise ValueError(f"target {target!r} is not in the visible object "
                             "list; use an exact visible id")
    elif name in ROOM_TARGET_ACTIONS:
        if target not in room_options:
            raise ValueError(f"room {target!r} is not among the room options")
    else:
        target = None
    if name in AMOUNT_ACTIONS:
        try:
            amount = float(amount)
        except (TypeError, ValueError):
            raise ValueError(f"{name} needs a numeric positive amount")
        if amount <= 0:
            raise ValueError(f"{name} needs a positive amount")
    else:
        amount = None
    return Action(name=name, target=target, amount=amount)


def parse_memory_reply(text: str, room_options: list[str]) -> MemoryOutputs:
    data = extract_json(text)
    if set(data.keys()) != {"memory", "target_room"}:
        raise ValueError('reply must contain exactly the keys "memory" and '
                         '"target_room"')
    if data["target_room"] not in room_options:
        raise ValueError(f"target_room {data['target_room']!r} is not among "
                         "the room options")
    return MemoryOutputs(historical_summary=str(data["memory"]),
                         target_room=data["target_room"])


class _TokenLedger:
    def __init__(self):
        self._prompt = 0
        self._completion = 0

    def add(self, reply: dict) -> None:
        self._prompt += reply["prompt_tokens"]
        self._completion += reply["completion_tokens"]

    def take(self) -> dict:
        out = {"prompt": self._prompt, "completion": self._completion}
        self._prompt = self._completion = 0
        return out


class RemoteLLMPlanner:
    """Planning probe backed by a chat-completion endpoint."""

    def __init__(self, task: TaskSpec, endpoint: EndpointConfig,
                 prompts_dir: str | Path | None = None,
                 temperature: float = 0.0):
        self.task = task
        self.endpoint = endpoint
        self.temperature = temperature
        self._template = _load_prompt("planner_prompt.txt", prompts_dir)
        self._ledger = _TokenLedger()

    def take_tokens(self) -> dict:
        return self._ledger.take()

    def _render(self, obs: Observation, mem: MemoryOutputs) -> str:
        visible = "\n".join(
            f"- {v['id']} | {v['class']} | {json.dumps(v['states'], sort_keys=True)} "
            f"| near={str(v['near']).lower()}" for v in obs.visible) or "- (nothing)"
        return self._template.format(
            instruction=self.task.instruction,
            historical_summary=mem.historical_summary,
            target_room=mem.target_room,
            room_label=obs.room_label,
            visible=visible,
            holding=obs.holding or "nothing",
            room_options=", ".join(obs.room_options),
            last_result=json.dumps(obs.last_action_result) if obs.last_action_result else "none",
        )

    def decide(self, instruction: str, obs: Observation,
               mem: MemoryOutputs) -> Action:
        messages = [{"role": "user", "content": self._render(obs, mem)}]
        last_error = ""
        for _ in range(1 + MAX_FORMAT_RETRIES):
            reply = chat_complete(self.endpoint, messages, self.temperature)
            self._ledger.add(reply)
            try:
                return parse_planner_reply(reply["text"], obs.visible_ids(),
                                           obs.room_options)
            except ValueError as exc:
                last_error = str(exc)
                messages.append({"role": "assistant", "content": reply["text"]})
                messages.append({"role": "user", "content":
                                 f"Your reply was rejected: {last_error}. "
                                 "Answer again with JSON only, obeying the rules."})
        raise PolicyError(f"planner output malformed after retries: {last_error}")


class RemoteMemoryProbe:
    """LLM-backed drop-in for summarize_memory (same call shape)."""

    def __init__(self, endpoint: EndpointConfig,
                 prompts_dir: str | Path | None = None,
                 temperature: float = 0.0):
        self.endpoint = endpoint
        self.temperature = temperature
        self._template = _load_prompt("memory_prompt.txt", prompts_dir)
        self.ledger = _TokenLedger()

    def __call__(self, memory: MemoryState, task: TaskSpec,
                 group_steps: list[int]) -> MemoryOutputs:
        room_options = sorted(memory.long_term)
        window = "\n".join(
            f"- step {step}: {json.dumps(action)} -> {json.dumps(result)}"
            for step, action, result in memory.short_term.window) or "- (empty)"
        prompt = self._template.format(
            instruction=task.instruction,
            long_term=json.dumps({k: list(v) for k, v in sorted(memory.long_term.items())}),
            window=window,
            holding=memory.short_term.holding or "nothing",
            highlighted=memory.short_term.highlighted or "nothing",
            last_delta=json.dumps([list(c) for c in memory.short_term.last_delta]),
            progress=f"{len(group_steps)}/{len(task.goal.groups)} goal groups done",
            room_options=", ".join(room_options),
        )
        messages = [{"role": "user", "content": prompt}]
        last_error = ""
        for _ in range(1 + MAX_FORMAT_RETRIES):
            reply = chat_complete(self.endpoint, messages, self.temperature)
            self.ledger.add(reply)
            try:
                return parse_memory_reply(reply["text"], room_options)
            except ValueError as exc:
                last_error = str(exc)
                messages.append({"role": "assistant", "content": reply["text"]})
                messages.append({"role": "user", "content":
                                 f"Your reply was rejected: {last_error}. "
                                 "Reply again with the exact JSON contract."})
        raise PolicyError(f"memory output malformed after retries: {last_error}")
