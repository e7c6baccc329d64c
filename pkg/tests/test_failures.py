import pytest

from homebench.errors import NotAFailure
from homebench.tasks import (CONTEXT_SATURATION_COLLAPSE, EXPLORATORY_DEADLOCK,
                             OTHER, SEMANTIC_HALLUCINATION, EpisodeRecord,
                             GoalPredicate, GoalSpec, StepRecord,
                             classify_failure)

GOAL = GoalSpec(groups=(
    (GoalPredicate.state_equals("tv", "is_on", True),),
    (GoalPredicate.state_equals("lamp", "is_on", True),),
))


def _step(i, room, action_name="move_to_room", target=None, visible=()):
    return StepRecord(
        step=i, observation={"room_id": room,
                             "visible": [{"id": v, "class": v.rsplit("_", 1)[0],
                                          "states": {}, "near": True}
                                         for v in visible]},
        memory=None,
        action={"name": action_name, "target": target, "amount": None},
        result={"ok": True}, grounding="ok")


def _failure_record(steps, group_steps=(), meta=None):
    return EpisodeRecord(task_id="T-1", seed=0, policy="test", apartment="apt",
                         steps=list(steps),
                         outcome={"status": "failure", "reason": "BudgetExhausted"},
                         final_state_hash="0" * 64,
                         group_steps=list(group_steps), meta=meta or {})


def test_room_ping_pong_is_exploratory_deadlock():
    steps = [_step(i, room) for i, room in
             enumerate(["A", "B", "A", "B", "A", "B"], start=1)]
    record = _failure_record(steps)
    assert EXPLORATORY_DEADLOCK in classify_failure(record, GOAL)


def test_deadlock_invariant_under_room_renaming():
    rooms = ["A", "B", "C", "A", "B", "C", "A", "B", "C"]
    renamed = [r.replace("A", "x7").replace("B", "q2").replace("C", "m9")
               for r in rooms]
    for sequence in (rooms, renamed):
        steps = [_step(i, room) for i, room in enumerate(sequence, start=1)]
        assert EXPLORATORY_DEADLOCK in classify_failure(_failure_record(steps), GOAL)


def test_loop_with_progress_is_not_deadlock():
    steps = [_step(i, room) for i, room in
             enumerate(["A", "B", "A", "B", "A", "B"], start=1)]
    record = _failure_record(steps, group_steps=[3])  # progress inside the loop
    assert EXPLORATORY_DEADLOCK not in classify_failure(record, GOAL)


def test_success_record_raises():
    record = _failure_record([_step(1, "A")])
    record.outcome = {"status": "success", "at_step": 1}
    with pytest.raises(NotAFailure):
        classify_failure(record, GOAL)


def test_redundant_post_progress_actions_flag_saturation():
    steps = [_step(1, "A", "turn_on", "tv_1", visible=["tv_1"])]
    steps += [_step(i, "A", "turn_on", "tv_1", visible=["tv_1"])
              for i in range(2, 8)]
    record = _failure_record(steps, group_steps=[1])
    assert CONTEXT_SATURATION_COLLAPSE in classify_failure(record, GOAL)


def test_semantic_hallucination_in_plausible_wrong_room():
    steps = [
        _step(1, "A", "move_to_room", "B"),
        _step(2, "B", "highlight", "sofa_1", visible=["sofa_1"]),
        _step(3, "B", "turn_right", None),
    ]
    record = _failure_record(steps, meta={"goal_rooms": ["A"], "scenario": 5})
    assert SEMANTIC_HALLUCINATION in classify_failure(record, GOAL)


def test_quiet_failure_is_other():
    steps = [_step(1, "A", "turn_right", None)]
    record = _failure_record(steps, meta={"goal_rooms": ["A"], "scenario": 5})
    assert classify_failure(record, GOAL) == {OTHER}
