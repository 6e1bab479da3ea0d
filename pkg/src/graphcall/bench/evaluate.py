"""Run problems through the session loop, grade the answers, and aggregate
accuracy and outlier-rejected timing per (task, difficulty) cell.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from ..gateway import ScriptedGateway, ScriptedPolicy, ScriptStep
from ..orchestrator import SessionConfig, build_system_prompt, run_session
from .answers import extract_answer
from .problems import NLGraphProblem
from .verify import Verdict, canonical_answer, mutated_answer, verify


@dataclass
class EvalRecord:
    problem_id: str
    task: str
    difficulty: str
    correct: bool
    reason: str
    wall_time: float
    termination: str
    rounds: int
    tool_calls: int

    def to_json(self) -> dict:
        return dict(self.__dict__)


@dataclass
class CellStats:
    task: str
    difficulty: str
    count: int
    correct: int
    mean_time: float
    rejected_timings: int

    @property
    def accuracy(self) -> float:
        return 100.0 * self.correct / self.count if self.count else 0.0


@dataclass
class EvalReport:
    records: list[EvalRecord] = field(default_factory=list)

    def cells(self) -> list[CellStats]:
        grouped: dict[tuple[str, str], list[EvalRecord]] = {}
        for r in self.records:
            grouped.setdefault((r.task, r.difficulty), []).append(r)
        stats = []
        for (task, difficulty), rows in sorted(grouped.items()):
            mean, rejected = outlier_rejected_mean([r.wall_time for r in rows])
            stats.append(CellStats(
                task=task,
                difficulty=difficulty,
                count=len(rows),
                correct=sum(r.correct for r in rows),
                mean_time=mean,
                rejected_timings=rejected,
            ))
        return stats

    def render_table(self) -> str:
        header = f"{'Task':<20} {'Difficulty':<12} {'Problems':>8} {'Correct':>8} {'Accuracy':>9} {'Avg Time (s)':>13}"
        lines = [header, "-" * len(header)]
        for c in self.cells():
            lines.append(
                f"{c.task:<20} {c.difficulty:<12} {c.count:>8} {c.correct:>8} "
                f"{c.accuracy:>8.2f}% {c.mean_time:>13.2f}"
            )
        return "\n".join(lines)

    def to_csv(self) -> str:
        lines = ["task,difficulty,problems,correct,accuracy_pct,mean_time_s,rejected_timing_samples"]
        for c in self.cells():
            lines.append(
                f"{c.task},{c.difficulty},{c.count},{c.correct},"
                f"{c.accuracy:.2f},{c.mean_time:.4f},{c.rejected_timings}"
            )
        return "\n".join(lines) + "\n"

    def records_jsonl(self) -> str:
        return "".join(json.dumps(r.to_json()) + "\n" for r in self.records)


def _quartiles(values: list[float]) -> tuple[float, float]:
    """Q1 and Q3 with linear interpolation between closest ranks."""
    data = sorted(values)
    n = len(data)
    if n == 1:
        return data[0], data[0]

    def at(q: float) -> float:
        pos = q * (n - 1)
        lo = int(pos)
        hi = min(lo + 1, n - 1)
        frac = pos - lo
        return data[lo] * (1 - frac) + data[hi] * frac

    return at(0.25), at(0.75)


def outlier_rejected_mean(times: list[float]) -> tuple[float, int]:
    """Mean after dropping samples above Q3 + 1.5 * IQR; returns (mean, #dropped)."""
    if not times:
        return 0.0, 0
    q1, q3 = _quartiles(times)
    cutoff = q3 + 1.5 * (q3 - q1)
    kept = [t for t in times if t <= cutoff]
    return sum(kept) / len(kept), len(times) - len(kept)


# -- solvers -------------------------------------------------------------------


class ScriptedAnswerSolver:
    """Answers every problem with one scripted final turn (no tool calls)."""

    def __init__(self, name: str, answer_for, grounded: bool = True):
        self.name = name
        self.grounded = grounded
        self._answer_for = answer_for

    def gateway_for(self, problem: NLGraphProblem) -> ScriptedGateway:
        value = self._answer_for(problem)
        payload = value if isinstance(value, str) else json.dumps(value)
        text = f"Here is the result.\nANSWER: {payload}"
        return ScriptedGateway(ScriptedPolicy(steps=[ScriptStep(text=text)]))


def _canonical_payload(problem: NLGraphProblem) -> str:
    value = canonical_answer(problem)
    if problem.task in ("connectivity", "cycle"):
        return "yes" if value else "no"
    if problem.task == "maximum_flow":
        return json.dumps({"value": value["value"]})
    if problem.task == "gnn":
        return json.dumps({str(k): v for k, v in value.items()})
    if problem.task == "shortest_path":
        return json.dumps(value)
    return json.dumps(value)


def _mutated_payload(problem: NLGraphProblem) -> str:
    value = mutated_answer(problem)
    if problem.task in ("connectivity", "cycle"):
        return "yes" if value else "no"
    if problem.task == "gnn":
        return json.dumps({str(k): v for k, v in value.items()})
    return json.dumps(value)


def scripted_oracle_solver() -> ScriptedAnswerSolver:
    return ScriptedAnswerSolver("scripted-oracle", _canonical_payload)


def always_wrong_solver() -> ScriptedAnswerSolver:
    return ScriptedAnswerSolver("always-wrong", _mutated_payload)


class LiveSolver:
    """One shared live gateway across problems, grounded or standalone."""

    def __init__(self, gateway, grounded: bool = True, name: str = "live"):
        self.name = name
        self.grounded = grounded
        self._gateway = gateway

    def gateway_for(self, problem: NLGraphProblem):
        return self._gateway


# -- the run ---------------------------------------------------------------------


def evaluate(
    problems: list[NLGraphProblem],
    solver,
    config: SessionConfig | None = None,
    workers: int = 1,
) -> EvalReport:
    config = config or SessionConfig()
    system_prompt = build_system_prompt(
        "grounded" if solver.grounded else "standalone", benchmark=True
    )

    def run_one(problem: NLGraphProblem) -> EvalRecord:
        try:
            outcome = run_session(
                problem.prompt,
                config,
                solver.gateway_for(problem),
                system_prompt=system_prompt,
                grounded=solver.grounded,
            )
            answer, note = extract_answer(problem.task, outcome.final_text)
            if answer is None:
                verdict = Verdict(False, note, outcome.wall_time, outcome.termination)
            else:
                verdict = verify(problem, answer, wall_time=outcome.wall_time,
                                 termination=outcome.termination)
            rounds, calls = outcome.rounds_used, outcome.tool_call_count
        except Exception as exc:  # noqa: BLE001 - a failing problem must not abort the run
            verdict = Verdict(False, f"session failed: {type(exc).__name__}: {exc}", 0.0, "error")
            rounds, calls = 0, 0
        return EvalRecord(
            problem_id=problem.id,
            task=problem.task,
            difficulty=problem.difficulty,
            correct=verdict.correct,
            reason=verdict.reason,
            wall_time=verdict.wall_time,
            termination=verdict.termination,
            rounds=rounds,
            tool_calls=calls,
        )

    if workers <= 1:
        records = [run_one(p) for p in problems]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(run_one, problems))
    return EvalReport(records=records)
