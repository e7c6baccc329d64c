import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homebench.errors import UnknownTaskId
from homebench.tasks import (EpisodeRecord, GoalPredicate, GoalSpec,
                             StepRecord, TaskSpec, Tier, compute_metrics,
                             render_table)


def _task(task_id: str, tier: Tier, scenario: int, apartment="apt_0",
          cross=False) -> TaskSpec:
    return TaskSpec(task_id=task_id, tier=tier, scenario=scenario,
                    instruction="x",
                    goal=GoalSpec(groups=((GoalPredicate.inspected("bed"),),)),
                    cross_room=cross, apartment=apartment, start_room="room_0")


def _record(task_id: str, success: bool, steps: int, tokens: int = 0) -> EpisodeRecord:
    step_records = [
        StepRecord(step=i + 1, observation={}, memory=None,
                   action={"name": "turn_right", "target": None, "amount": 90.0},
                   result={"ok": True}, grounding="ok",
                   tokens={"prompt": tokens // max(steps, 1), "completion": 0})
        for i in range(steps)
    ]
    outcome = {"status": "success", "at_step": steps} if success \
        else {"status": "failure", "reason": "BudgetExhausted"}
    return EpisodeRecord(task_id=task_id, seed=0, policy="test",
                         apartment="apt_0", steps=step_records, outcome=outcome,
                         final_state_hash="0" * 64)


TASKS = [
    _task("B-1-01", Tier.BASIC, 1), _task("B-1-02", Tier.BASIC, 1),
    _task("B-1-03", Tier.BASIC, 1), _task("B-1-04", Tier.BASIC, 1),
    _task("R-5-01", Tier.REASONING, 5), _task("L-8-01", Tier.LONG_HORIZON, 8),
]


def test_sr_three_of_four():
    records = [_record("B-1-01", True, 5), _record("B-1-02", True, 9),
               _record("B-1-03", True, 7), _record("B-1-04", False, 60)]
    report = compute_metrics(records, TASKS)
    assert report.per_tier["Basic"].sr == 75.0


def test_steps_mean_over_successes_only():
    records = [_record("B-1-01", True, 10), _record("B-1-02", True, 20),
               _record("B-1-03", False, 60)]
    report = compute_metrics(records, TASKS)
    assert report.per_tier["Basic"].steps_mean == 15.0


def test_token_additivity_per_episode():
    record = _record("R-5-01", True, 2)
    record.steps[0].tokens = {"prompt": 100, "completion": 0}
    record.steps[1].tokens = {"prompt": 150, "completion": 50}
    assert record.token_total == 300
    report = compute_metrics([record], TASKS)
    assert report.per_tier["Reasoning"].tc_mean == 300.0


def test_empty_cells_are_undefined_not_zero():
    records = [_record("B-1-01", False, 60)]
    report = compute_metrics(records, TASKS)
    assert report.per_tier["Basic"].steps_mean is None
    assert report.per_tier["Reasoning"].sr is None
    table = render_table(report)
    assert "--" in table


def test_unknown_task_id():
    with pytest.raises(UnknownTaskId):
        compute_metrics([_record("Z-9-99", True, 3)], TASKS)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 100_000))
def test_partition_recombines_to_overall(seed):
    rng = random.Random(seed)
    records = []
    for i in range(rng.randint(1, 20)):
        task = rng.choice(TASKS)
        records.append(_record(task.task_id, rng.random() < 0.6,
                               rng.randint(1, 60)))
    report = compute_metrics(records, TASKS)
    weighted = sum(cell.successes for cell in report.per_tier.values())
    attempts = sum(cell.attempts for cell in report.per_tier.values())
    assert attempts == report.overall.attempts
    assert weighted == report.overall.successes
    for grouping in (report.per_apartment, report.per_cross_room):
        assert sum(c.attempts for c in grouping.values()) == attempts
        assert sum(c.successes for c in grouping.values()) == weighted
