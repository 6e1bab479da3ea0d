"""Operator and CI entry points: run the benchmark, solve one problem, chat
in a terminal, serve the HTTP API, and replay recorded fixtures."""

from __future__ import annotations

import json
import socket
import sys
import time
from pathlib import Path

import click

from . import bench, fixtures, toolkit
from .gateway import (
    LiveConfig,
    LiveGateway,
    ScriptedGateway,
    ScriptedPolicy,
    load_transcript,
    record_transcript,
)
from .orchestrator import Session, SessionConfig, run_session

_SCENARIO_TOOLS = {"get_environment_data", "get_environment_map_data", "apply_event"}


def _timestamp() -> str:
    return time.strftime("%Y%m%d-%H%M%S")


def _make_gateway(policy: str | None, base_url: str, api_key_env: str):
    if policy:
        path = Path(policy)
        if path.exists():
            return ScriptedGateway(ScriptedPolicy.from_transcript(load_transcript(path)))
        return fixtures.scripted_gateway(policy)
    return LiveGateway(LiveConfig(base_url=base_url, api_key_env=api_key_env))


@click.group()
def main() -> None:
    """Solve natural-language graph problems with a function-called graph library."""


@main.command("bench")
@click.option("--task", "-t", "tasks", multiple=True,
              type=click.Choice(bench.TASKS), help="tasks to run (default: all)")
@click.option("--difficulty", "-d", "difficulties", multiple=True,
              type=click.Choice(bench.DIFFICULTIES), help="difficulties to run (default: easy)")
@click.option("--per-cell", default=50, show_default=True, help="problems per (task, difficulty) cell")
@click.option("--seed", default=0, show_default=True, help="base seed for problem generation")
@click.option("--solver", default="scripted-oracle", show_default=True,
              type=click.Choice(["scripted-oracle", "always-wrong", "live-grounded", "live-standalone"]))
@click.option("--prompt-variant", default="original", show_default=True,
              type=click.Choice(bench.PROMPT_VARIANTS))
@click.option("--workers", default=1, show_default=True)
@click.option("--max-rounds", default=16, show_default=True)
@click.option("--model", default="gpt-4-0613", show_default=True)
@click.option("--base-url", default=LiveConfig.base_url, show_default=True)
@click.option("--api-key-env", default=LiveConfig.api_key_env, show_default=True)
@click.option("--output", "-o", default=None, help="output directory (default runs/bench-<timestamp>)")
def bench_command(tasks, difficulties, per_cell, seed, solver, prompt_variant,
                  workers, max_rounds, model, base_url, api_key_env, output) -> None:
    """Generate problems, run the chosen solver, and write the score table."""
    tasks = tasks or bench.TASKS
    difficulties = difficulties or ("easy",)
    problems = []
    for task in tasks:
        for difficulty in difficulties:
            for i in range(per_cell):
                problem = bench.generate_problem(task, difficulty, seed + i)
                if prompt_variant != "original":
                    problem.prompt = bench.render_instance_prompt(problem, prompt_variant)
                problems.append(problem)
    if solver == "scripted-oracle":
        chosen = bench.scripted_oracle_solver()
    elif solver == "always-wrong":
        chosen = bench.always_wrong_solver()
    else:
        gateway = LiveGateway(LiveConfig(base_url=base_url, api_key_env=api_key_env))
        chosen = bench.LiveSolver(gateway, grounded=solver == "live-grounded", name=solver)
    config = SessionConfig(max_rounds=max_rounds, model=model)
    report = bench.evaluate(problems, chosen, config=config, workers=workers)

    out_dir = Path(output) if output else Path("runs") / f"bench-{_timestamp()}"
    out_dir.mkdir(parents=True, exist_ok=True)
    table = report.render_table()
    (out_dir / "table.txt").write_text(table + "\n", encoding="utf-8")
    (out_dir / "report.csv").write_text(report.to_csv(), encoding="utf-8")
    (out_dir / "records.jsonl").write_text(report.records_jsonl(), encoding="utf-8")
    meta = {
        "format": "graphcall-report/v1",
        "solver": solver,
        "tasks": list(tasks),
        "difficulties": list(difficulties),
        "per_cell": per_cell,
        "seed": seed,
        "prompt_variant": prompt_variant,
    }
    (out_dir / "meta.json").write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")
    click.echo(table)
    click.echo(f"\nwrote {out_dir}/table.txt, report.csv, records.jsonl, meta.json")


@main.command("solve")
@click.option("--prompt", "-p", default=None, help="problem statement (inline)")
@click.option("--prompt-file", type=click.Path(exists=True), default=None)
@click.option("--policy", default=None,
              help="scripted policy name or transcript fixture path (offline solving)")
@click.option("--standalone", is_flag=True, help="no tools: plain chain-of-thought baseline")
@click.option("--kind", default=toolkit.GRAPH_SESSION, type=click.Choice(toolkit.SESSION_KINDS))
@click.option("--max-rounds", default=16, show_default=True)
@click.option("--model", default="gpt-4-0613", show_default=True)
@click.option("--base-url", default=LiveConfig.base_url, show_default=True)
@click.option("--api-key-env", default=LiveConfig.api_key_env, show_default=True)
@click.option("--output", "-o", default=None, help="transcript dump path (default runs/solve-<timestamp>.jsonl)")
def solve_command(prompt, prompt_file, policy, standalone, kind, max_rounds,
                  model, base_url, api_key_env, output) -> None:
    """Drive one problem to a final answer and dump the transcript."""
    if prompt_file:
        prompt = Path(prompt_file).read_text(encoding="utf-8").strip()
    if not prompt:
        raise click.UsageError("provide a problem with --prompt or --prompt-file")
    gateway = _make_gateway(policy, base_url, api_key_env)
    config = SessionConfig(session_kind=kind, max_rounds=max_rounds, model=model)
    outcome = run_session(prompt, config, gateway, grounded=not standalone)
    path = Path(output) if output else Path("runs") / f"solve-{_timestamp()}.jsonl"
    record_transcript(outcome.transcript, path)
    click.echo(f"termination: {outcome.termination} "
               f"(rounds={outcome.rounds_used}, tool_calls={outcome.tool_call_count})")
    if outcome.final_text:
        click.echo(outcome.final_text)
    click.echo(f"transcript written to {path}")
    if outcome.termination != "final_answer":
        sys.exit(1)


@main.command("chat")
@click.option("--kind", default=toolkit.DISASTER_SESSION, type=click.Choice(toolkit.SESSION_KINDS))
@click.option("--policy", default=None, help="scripted policy name or fixture path")
@click.option("--max-rounds", default=16, show_default=True)
@click.option("--model", default="gpt-4-0613", show_default=True)
@click.option("--base-url", default=LiveConfig.base_url, show_default=True)
@click.option("--api-key-env", default=LiveConfig.api_key_env, show_default=True)
def chat_command(kind, policy, max_rounds, model, base_url, api_key_env) -> None:
    """Interactive terminal loop: each stdin line is one user turn."""
    gateway = _make_gateway(policy, base_url, api_key_env)
    config = SessionConfig(session_kind=kind, max_rounds=max_rounds, model=model)

    def show(event) -> None:
        if event.kind == "assistant_text":
            click.echo(f"assistant: {event.payload['text']}")
        elif event.kind == "tool_call":
            click.echo(f"  -> {event.payload['name']}({event.payload['arguments']})")
        elif event.kind == "tool_result":
            click.echo(f"  <- {event.payload['text']}")

    session = Session(config, gateway, on_event=show)
    click.echo(f"graphcall chat ({kind} session); empty line or EOF quits")
    while True:
        try:
            line = click.prompt("you", prompt_suffix="> ", default="", show_default=False)
        except (EOFError, click.Abort):
            break
        if not line.strip():
            break
        outcome = session.send(line.strip())
        if outcome.termination != "final_answer":
            click.echo(f"[turn ended: {outcome.termination}]")
            if outcome.termination in ("context_limit", "transport_failure"):
                break
    click.echo("bye")


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8008, show_default=True, help="0 picks a free port")
def serve_command(host, port) -> None:
    """Run the HTTP session API (long-poll events, world events, snapshots)."""
    import uvicorn

    from .service import create_app

    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    sock.bind((host, port))
    actual = sock.getsockname()[1]
    click.echo(f"listening on http://{host}:{actual}", nl=True)
    sys.stdout.flush()
    server = uvicorn.Server(uvicorn.Config(create_app(), log_level="warning"))
    server.run(sockets=[sock])


@main.command("replay")
@click.argument("fixture", type=click.Path(exists=True))
@click.option("--kind", default=None, type=click.Choice(toolkit.SESSION_KINDS),
              help="session kind (default: inferred from the fixture's tool calls)")
def replay_command(fixture, kind) -> None:
    """Re-run a recorded transcript against the live library and diff it."""
    messages = load_transcript(fixture)
    if not messages:
        raise click.UsageError("fixture is empty")
    if kind is None:
        uses_scenario = any(
            c.name in _SCENARIO_TOOLS
            for m in messages if m.tool_calls
            for c in m.tool_calls
        )
        kind = toolkit.DISASTER_SESSION if uses_scenario else toolkit.GRAPH_SESSION
    policy = ScriptedPolicy.from_transcript(messages)
    system_prompt = messages[0].content if messages[0].role == "system" else None
    user_texts = [m.content for m in messages if m.role == "user"]
    config = SessionConfig(session_kind=kind, max_rounds=64)
    session = Session(config, ScriptedGateway(policy), system_prompt=system_prompt)
    for text in user_texts:
        session.send(text)
    regenerated = [json.dumps(m.to_json()) for m in session.transcript]
    original = [json.dumps(m.to_json()) for m in messages]
    if regenerated == original:
        click.echo(f"replay ok: {len(original)} messages match byte for byte")
        return
    for i, (a, b) in enumerate(zip(original, regenerated)):
        if a != b:
            click.echo(f"mismatch at message {i}:\n  recorded:    {a}\n  regenerated: {b}")
            break
    if len(original) != len(regenerated):
        click.echo(f"length mismatch: recorded {len(original)}, regenerated {len(regenerated)}")
    sys.exit(1)


if __name__ == "__main__":
    main()
