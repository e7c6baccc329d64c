"""Suite assembly: solver-verified tasks matching the target distribution.

Scenario totals are fixed (tier count spread evenly over its scenarios); the
cross-room quota is fixed per tier and allocated across scenarios according
to what each scenario's verified candidate pool can actually supply.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field

from ..errors import DistributionUnachievable, ExhaustedBindings
from ..scene.model import SceneGraph
from ..tasks.spec import (DEFAULT_BUDGET, SCENARIOS_OF_TIER, TIER_LETTER,
                          TaskSuite, Tier)
from .graph import extract_scene_graph
from .solver import FeasibilityReport, initial_state, plan_and_compile
from .templates import TaskCandidate, generate_candidates

_GATHER_ROUNDS = 4


@dataclass
class SuiteConfig:
    tier_counts: dict = field(default_factory=lambda: {
        Tier.BASIC: 120, Tier.REASONING: 90, Tier.LONG_HORIZON: 90})
    cross_room_fraction: dict = field(default_factory=lambda: {
        Tier.BASIC: 46 / 120, Tier.REASONING: 0.0, Tier.LONG_HORIZON: 41 / 90})
    budget: int = DEFAULT_BUDGET

    def cross_counts(self) -> dict:
        return {tier: round(self.tier_counts[tier] * self.cross_room_fraction[tier])
                for tier in self.tier_counts}


def _derive_seed(*parts) -> int:
    return zlib.crc32("|".join(str(p) for p in parts).encode()) & 0x7FFFFFFF


def _spread(total: int, bins: int) -> list[int]:
    base, extra = divmod(total, bins)
    return [base + (1 if i < extra else 0) for i in range(bins)]


@dataclass
class _VerifiedCandidate:
    candidate: TaskCandidate
    scene_ref: str
    cross_room: bool
    report: FeasibilityReport


def _verify_and_label(candidate: TaskCandidate, scene: SceneGraph,
                      budget: int) -> _VerifiedCandidate | None:
    task = candidate.task
    world = initial_state(scene, task.start_room)
    report = plan_and_compile(world, task.goal, budget)
    if not report.feasible or (report.min_steps or 0) < 1:
        return None
    restricted = plan_and_compile(initial_state(scene, task.start_room),
                                  task.goal, budget,
                                  restrict_room=world.current_room.id)
    return _VerifiedCandidate(candidate=candidate, scene_ref="",
                              cross_room=not restricted.feasible, report=report)


class _ScenarioPool:
    """Verified candidates for one scenario, bucketed per scene and label."""

    def __init__(self, scenes, graphs, tier: Tier, sid: int, budget: int, seed: int):
        self.scenes = scenes
        self.graphs = graphs
        self.tier = tier
        self.sid = sid
        self.budget = budget
        self.seed = seed
        self.buckets = {ref: {"cross": [], "single": []} for ref, _ in scenes}
        self._keys: set = set()
        self._round = 0

    def gather(self, want_total: int) -> None:
        while self._round < _GATHER_ROUNDS:
            if (self.available("single") >= want_total
                    and self.available("cross") + self.available("single")
                    >= int(want_total * 1.5)):
                break
            per_scene = max(8, want_total * 2 // max(1, len(self.scenes))) \
                + 8 * self._round
            for ref, scene in self.scenes:
                try:
                    candidates = generate_candidates(
                        self.graphs[ref], self.tier, self.sid, per_scene,
                        _derive_seed(self.seed, ref, self.sid, self._round))
                except ExhaustedBindings:
                    continue
                for cand in candidates:
                    key = (ref, cand.template_id, tuple(cand.bound_objects),
                           cand.task.start_room)
                    if key in self._keys:
                        continue
                    self._keys.add(key)
                    verified = _verify_and_label(cand, scene, self.budget)
                    if verified is None:
                        continue
                    if self.tier is Tier.REASONING and verified.cross_room:
                        continue  # single-room by design
                    verified.scene_ref = ref
                    label = "cross" if verified.cross_room else "single"
                    self.buckets[ref][label].append(verified)
            self._round += 1

    def available(self, label: str) -> int:
        return sum(len(b[label]) for b in self.buckets.values())

    def take(self, want_cross: int, want_single: int) -> list[_VerifiedCandidate]:
        picked: list[_VerifiedCandidate] = []
        refs = [ref for ref, _ in self.scenes]
        need = {"cross": want_cross, "single": want_single}
        progress = True
        while progress and (need["cross"] > 0 or need["single"] > 0):
            progress = False
            for ref in refs:
                for label in ("cross", "single"):
                    if need[label] > 0 and self.buckets[ref][label]:
                        picked.append(self.buckets[ref][label].pop(0))
                        need[label] -= 1
                        progress = True
        return picked


def _allocate_cross(pools: list[_ScenarioPool], totals: list[int],
                    tier_cross: int) -> list[int] | None:
    """Per-scenario cross counts: scenario totals stay exact, the tier-level
    cross sum is exact, bounded by each pool's actual supply."""
    lo = [max(0, total - pool.available("single"))
          for pool, total in zip(pools, totals)]
    hi = [min(total, pool.available("cross"))
          for pool, total in zip(pools, totals)]
    if sum(lo) > tier_cross or sum(hi) < tier_cross:
        return None
    cross = list(lo)
    remaining = tier_cross - sum(lo)
    while remaining > 0:
        moved = False
        for i in range(len(pools)):
            if remaining == 0:
                break
            if cross[i] < hi[i]:
                cross[i] += 1
                remaining -= 1
                moved = True
        if not moved:
            return None
    return cross


def build_suite(scenes: list[tuple[str, SceneGraph]], config: SuiteConfig,
                seed: int) -> tuple[TaskSuite, dict[str, FeasibilityReport]]:
    """Emit solver-verified tasks with exact tier counts and the configured
    cross-room mix (Reasoning stays at exactly zero cross-room tasks).

    Raises DistributionUnachievable with the closest achieved mix when the
    scenes cannot fill the quotas.
    """
    scenes = sorted(scenes, key=lambda pair: pair[0])
    graphs = {ref: extract_scene_graph(scene) for ref, scene in scenes}
    cross_targets = config.cross_counts()
    tasks = []
    verification: dict[str, FeasibilityReport] = {}
    achieved = {tier.value: {"total": 0, "cross": 0} for tier in Tier}

    for tier in (Tier.BASIC, Tier.REASONING, Tier.LONG_HORIZON):
        scenario_ids = SCENARIOS_OF_TIER[tier]
        totals = _spread(config.tier_counts[tier], len(scenario_ids))
        pools = [_ScenarioPool(scenes, graphs, tier, sid, config.budget, seed)
                 for sid in scenario_ids]
        for pool, want in zip(pools, totals):
            pool.gather(want)
        cross_alloc = _allocate_cross(pools, totals, cross_targets[tier])
        if cross_alloc is None:
            for pool, total in zip(pools, totals):
                got = min(total, pool.available("cross") + pool.available("single"))
                achieved[tier.value]["total"] += got
                achieved[tier.value]["cross"] += min(pool.available("cross"), got)
            raise DistributionUnachievable(
                f"{tier.value}: cannot reach {cross_targets[tier]} cross-room "
                f"tasks over {config.tier_counts[tier]}", achieved)
        for pool, sid, total, cross in zip(pools, scenario_ids, totals, cross_alloc):
            picked = pool.take(cross, total - cross)
            if len(picked) < total:
                achieved[tier.value]["total"] += len(picked)
                raise DistributionUnachievable(
                    f"scenario {sid}: only {len(picked)}/{total} candidates",
                    achieved)
            letter = TIER_LETTER[tier]
            for idx, verified in enumerate(picked, start=1):
                task = verified.candidate.task
                task.task_id = f"{letter}-{sid}-{idx:02d}"
                task.apartment = verified.scene_ref
                task.cross_room = verified.cross_room
                problems = task.validate()
                if problems:  # template invariants should make this unreachable
                    raise DistributionUnachievable(
                        f"{task.task_id}: {problems}", achieved)
                tasks.append(task)
                verification[task.task_id] = verified.report
                achieved[tier.value]["total"] += 1
                achieved[tier.value]["cross"] += int(verified.cross_room)

    suite = TaskSuite(tasks=tasks, seed=seed,
                      meta={"tier_counts": {t.value: config.tier_counts[t] for t in Tier},
                            "cross_counts": {t.value: cross_targets[t] for t in Tier}})
    return suite, verification
