"""Task specifications, tiers, scenarios and the task file format."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .goals import GoalSpec

TASK_FORMAT_VERSION = 1
DEFAULT_BUDGET = 60


class Tier(str, Enum):
    BASIC = "Basic"
    REASONING = "Reasoning"
    LONG_HORIZON = "LongHorizon"


TIER_LETTER = {Tier.BASIC: "B", Tier.REASONING: "R", Tier.LONG_HORIZON: "L"}

# scenario id -> (name, tier); ids 1-4 Basic, 5-7 Reasoning, 8-10 Long-horizon
SCENARIOS: dict[int, tuple[str, Tier]] = {
    1: ("Navigation & Inspection", Tier.BASIC),
    2: ("Simple Manipulation", Tier.BASIC),
    3: ("Appliance Control", Tier.BASIC),
    4: ("Storage Access", Tier.BASIC),
    5: ("Hygiene & Comfort", Tier.REASONING),
    6: ("Food & Drink", Tier.REASONING),
    7: ("Environmental Regulation", Tier.REASONING),
    8: ("Study & Work Setup", Tier.LONG_HORIZON),
    9: ("Entertainment Setup", Tier.LONG_HORIZON),
    10: ("Home Organization", Tier.LONG_HORIZON),
}

SCENARIOS_OF_TIER: dict[Tier, list[int]] = {
    tier: [sid for sid, (_, t) in SCENARIOS.items() if t is tier] for tier in Tier}


@dataclass
class TaskSpec:
    task_id: str
    tier: Tier
    scenario: int
    instruction: str
    goal: GoalSpec
    cross_room: bool
    apartment: str          # scene file reference
    start_room: str         # room id the agent spawns in (entry point)
    budget: int = DEFAULT_BUDGET

    def validate(self) -> list[str]:
        problems = []
        name_tier = SCENARIOS.get(self.scenario)
        if name_tier is None:
            problems.append(f"unknown scenario {self.scenario}")
        elif name_tier[1] is not self.tier:
            problems.append(f"scenario {self.scenario} belongs to tier {name_tier[1].value}")
        if self.tier is Tier.REASONING and self.cross_room:
            problems.append("Reasoning tasks are single-room by design")
        if self.tier is Tier.LONG_HORIZON:
            if len(self.goal.distinct_classes()) < 3:
                problems.append("Long-horizon goals must reference >=3 distinct classes")
            if self.goal.state_changing_count() < 2:
                problems.append("Long-horizon goals need >=2 state-changing predicates")
        try:
            self.goal.validate()
        except Exception as exc:
            problems.append(str(exc))
        return problems

    @property
    def scenario_name(self) -> str:
        return SCENARIOS[self.scenario][0]

    def to_dict(self) -> dict:
        return {
            "task_id": self.task_id,
            "tier": self.tier.value,
            "scenario": self.scenario,
            "scenario_name": self.scenario_name,
            "instruction": self.instruction,
            "cross_room": self.cross_room,
            "goal": self.goal.to_dict(),
            "apartment": self.apartment,
            "start_room": self.start_room,
            "budget": self.budget,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TaskSpec":
        return cls(task_id=data["task_id"], tier=Tier(data["tier"]),
                   scenario=int(data["scenario"]), instruction=data["instruction"],
                   goal=GoalSpec.from_dict(data["goal"]),
                   cross_room=bool(data["cross_room"]), apartment=data["apartment"],
                   start_room=data["start_room"],
                   budget=int(data.get("budget", DEFAULT_BUDGET)))


@dataclass
class TaskSuite:
    tasks: list[TaskSpec]
    seed: int | None = None
    meta: dict = field(default_factory=dict)

    def by_id(self) -> dict[str, TaskSpec]:
        return {t.task_id: t for t in self.tasks}

    def to_dict(self) -> dict:
        return {"format_version": TASK_FORMAT_VERSION, "seed": self.seed,
                "meta": self.meta, "tasks": [t.to_dict() for t in self.tasks]}

    @classmethod
    def from_dict(cls, data: dict) -> "TaskSuite":
        return cls(tasks=[TaskSpec.from_dict(t) for t in data["tasks"]],
                   seed=data.get("seed"), meta=dict(data.get("meta", {})))


def save_suite(suite: TaskSuite, path: str | Path) -> None:
    Path(path).write_text(json.dumps(suite.to_dict(), sort_keys=True, indent=1) + "\n")


def load_suite(path: str | Path) -> TaskSuite:
    return TaskSuite.from_dict(json.loads(Path(path).read_text()))
