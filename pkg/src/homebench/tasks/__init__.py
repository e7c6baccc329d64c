from .failures import (CONTEXT_SATURATION_COLLAPSE, EXPLORATORY_DEADLOCK,
                       OTHER, SCENARIO_PLAUSIBLE_CLASSES,
                       SEMANTIC_HALLUCINATION, classify_failure)
from .goals import (GoalPredicate, GoalSpec, GoalTracker, evaluate_goal,
                    group_satisfied)
from .metrics import (MetricCell, MetricsReport, compute_metrics, csv_rows,
                      render_table)
from .records import (AGENT_ABORTED, BUDGET_EXHAUSTED, EpisodeRecord,
                      StepRecord)
from .spec import (DEFAULT_BUDGET, SCENARIOS, SCENARIOS_OF_TIER, TIER_LETTER,
                   TaskSpec, TaskSuite, Tier, load_suite, save_suite)

__all__ = [
    "AGENT_ABORTED", "BUDGET_EXHAUSTED", "CONTEXT_SATURATION_COLLAPSE",
    "DEFAULT_BUDGET", "EXPLORATORY_DEADLOCK", "EpisodeRecord", "GoalPredicate",
    "GoalSpec", "GoalTracker", "MetricCell", "MetricsReport", "OTHER",
    "SCENARIOS", "SCENARIOS_OF_TIER", "SCENARIO_PLAUSIBLE_CLASSES",
    "SEMANTIC_HALLUCINATION", "StepRecord", "TIER_LETTER", "TaskSpec",
    "TaskSuite", "Tier", "classify_failure", "compute_metrics", "csv_rows",
    "evaluate_goal", "group_satisfied", "load_suite", "render_table",
    "save_suite",
]
