"""Desk-scale graph-reasoning benchmark: generation, prompts, grading, and
the evaluation harness."""

from .answers import extract_answer
from .evaluate import (
    EvalRecord,
    EvalReport,
    LiveSolver,
    always_wrong_solver,
    evaluate,
    outlier_rejected_mean,
    scripted_oracle_solver,
)
from .problems import (
    DIFFICULTIES,
    Instance,
    NLGraphProblem,
    TASKS,
    generate_problem,
    load_external_problems,
    load_problems,
    save_problems,
)
from .prompts import (
    PROMPT_VARIANTS,
    TOPO_QUESTION_REVISED,
    parse_prompt,
    render_instance_prompt,
)
from .verify import Verdict, canonical_answer, mutated_answer, verify

__all__ = [
    "DIFFICULTIES",
    "EvalRecord",
    "EvalReport",
    "Instance",
    "LiveSolver",
    "NLGraphProblem",
    "PROMPT_VARIANTS",
    "TASKS",
    "TOPO_QUESTION_REVISED",
    "Verdict",
    "always_wrong_solver",
    "canonical_answer",
    "evaluate",
    "extract_answer",
    "generate_problem",
    "load_external_problems",
    "load_problems",
    "mutated_answer",
    "outlier_rejected_mean",
    "parse_prompt",
    "render_instance_prompt",
    "save_problems",
    "scripted_oracle_solver",
    "verify",
]
