"""Episode records: the unit of metrics, replay and failure analysis."""

from __future__ import annotations

from dataclasses import dataclass, field

SUCCESS = "success"
FAILURE = "failure"
BUDGET_EXHAUSTED = "BudgetExhausted"
AGENT_ABORTED = "AgentAborted"


@dataclass
class StepRecord:
    step: int
    observation: dict
    memory: dict | None
    action: dict
    result: dict
    grounding: object  # "ok" or {"kind", "detail"}
    tokens: dict = field(default_factory=lambda: {"prompt": 0, "completion": 0})

    def to_dict(self) -> dict:
        return {"step": self.step, "observation": self.observation,
                "memory": self.memory, "action": self.action,
                "result": self.result, "grounding": self.grounding,
                "tokens": self.tokens}

    @classmethod
    def from_dict(cls, data: dict) -> "StepRecord":
        return cls(step=data["step"], observation=data["observation"],
                   memory=data.get("memory"), action=data["action"],
                   result=data["result"], grounding=data["grounding"],
                   tokens=dict(data.get("tokens", {"prompt": 0, "completion": 0})))


@dataclass
class EpisodeRecord:
    task_id: str
    seed: int
    policy: str
    apartment: str
    steps: list[StepRecord]
    outcome: dict  # {"status": "success", "at_step": int} or {"status": "failure", "reason": ...}
    final_state_hash: str
    noise: dict = field(default_factory=dict)
    group_steps: list[int] = field(default_factory=list)  # satisfied-group positions
    meta: dict = field(default_factory=dict)

    @property
    def success(self) -> bool:
        return self.outcome.get("status") == SUCCESS

    @property
    def steps_taken(self) -> int:
        if self.success:
            return int(self.outcome["at_step"])
        return len(self.steps)

    @property
    def token_total(self) -> int:
        return sum(s.tokens.get("prompt", 0) + s.tokens.get("completion", 0)
                   for s in self.steps)

    def header_dict(self) -> dict:
        return {"task_id": self.task_id, "seed": self.seed, "policy": self.policy,
                "apartment": self.apartment, "noise": self.noise, "meta": self.meta}

    def end_dict(self) -> dict:
        return {"outcome": self.outcome, "final_state_hash": self.final_state_hash,
                "group_steps": self.group_steps, "steps": len(self.steps)}
