"""Random goal/trace case generators shared by evaluator tests."""

from __future__ import annotations

from homebench.engine import Action, apply_action, capture_view
from homebench.tasks import GoalPredicate, GoalSpec

from .conftest import micro_state


def random_goal(rng) -> GoalSpec:
    preds = [
        lambda: GoalPredicate.state_equals("fridge", "is_open", rng.random() < 0.5),
        lambda: GoalPredicate.state_equals("lamp", "is_on", rng.random() < 0.5),
        lambda: GoalPredicate.state_equals("cup", "is_filled", rng.random() < 0.5),
        lambda: GoalPredicate.placed_on("pillow", "table"),
        lambda: GoalPredicate.inspected(rng.choice(["bed", "fridge", "cup"])),
        lambda: GoalPredicate.holding(rng.choice(["cup", "pillow", None])),
    ]
    groups = []
    for _ in range(rng.randint(1, 3)):
        groups.append(tuple(rng.choice(preds)() for _ in range(rng.randint(1, 2))))
    return GoalSpec(groups=tuple(groups))


def random_trace(rng, length=8):
    state = micro_state()
    targets = ["fridge_1", "cup_1", "bowl_1", "lamp_1", "pillow_1", "table_1",
               "bed_1", "faucet_1"]
    views = [capture_view(state)]
    for _ in range(length):
        name = rng.choice(["move_to", "highlight", "open", "close", "turn_on",
                           "turn_off", "pick_up", "place_on", "drop_held",
                           "move_to_room", "turn_right", "fill", "pour"])
        if name == "move_to_room":
            action = Action(name, target=rng.choice(["kitchen", "bedroom"]))
        elif name == "turn_right":
            action = Action(name, amount=rng.choice([45.0, 90.0, 120.0]))
        elif name == "drop_held":
            action = Action(name)
        else:
            action = Action(name, target=rng.choice(targets))
        apply_action(state, action)
        views.append(capture_view(state))
    return views
