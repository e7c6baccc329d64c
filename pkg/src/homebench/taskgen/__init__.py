from .graph import ObjectNode, PlanningGraph, extract_scene_graph
from .solver import (FeasibilityReport, compile_witness, label_cross_room,
                     plan_and_compile, plan_macro, verify_feasibility)
from .suite import SuiteConfig, build_suite
from .templates import (TaskCandidate, Variant, VARIANTS, generate_candidates,
                        keyword_goal_classes)

__all__ = [
    "FeasibilityReport", "ObjectNode", "PlanningGraph", "SuiteConfig",
    "TaskCandidate", "VARIANTS", "Variant", "build_suite", "compile_witness",
    "extract_scene_graph", "generate_candidates", "keyword_goal_classes",
    "label_cross_room", "plan_and_compile", "plan_macro", "verify_feasibility",
]
