"""The closed loop: send the transcript plus tool catalog, execute whatever
the assistant calls, feed results back, and stop on a prose answer or a
budget.

Tool errors never end a session on their own; the error text goes back into
the conversation so the model can repair its approach.  Only the four
termination causes below stop the loop.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from . import toolkit
from .gateway import (
    FINISH_LENGTH,
    ChatMessage,
    ChatParams,
    GatewayError,
    ROLE_ASSISTANT,
    ROLE_SYSTEM,
    ROLE_TOOL,
    ROLE_USER,
    over_budget,
)
from .toolkit import SessionState, ToolSpec, dispatch, tool_catalog

TERMINATION_FINAL = "final_answer"
TERMINATION_ROUNDS = "round_limit"
TERMINATION_CONTEXT = "context_limit"
TERMINATION_TRANSPORT = "transport_failure"

EVENT_USER_MESSAGE = "user_message"
EVENT_ASSISTANT_TEXT = "assistant_text"
EVENT_TOOL_CALL = "tool_call"
EVENT_TOOL_RESULT = "tool_result"
EVENT_GRAPH_SNAPSHOT = "graph_snapshot"
EVENT_WORLD_EVENT = "world_event"
EVENT_TERMINATION = "termination"

SYSTEM_PROMPT_GROUNDED = (
    "You can use the given functions through tool_calls to arrive at a solution. "
    "After each tool_call, the tool will provide you with the output of the function. "
    "Don't make assumptions about what values to plug into functions. "
    "Ask for clarification if a user request is ambiguous. "
    "Before making any function calls, first think step by step, determine a procedure "
    "to solve the problem, and then you can make tool_calls to find the solution. "
    "Once the problem is solved, provide the final answer."
)

SYSTEM_PROMPT_STANDALONE = (
    "Ask for clarification if a user request is ambiguous. "
    "First think step by step and then you can find the solution."
)

ANSWER_FORMAT_LINE = (
    "When the problem is solved, conclude your final message with a line of the form "
    "`ANSWER: <value>`."
)


def build_system_prompt(mode: str = "grounded", benchmark: bool = False) -> str:
    """System prompt for grounded (tool-calling) or standalone sessions;
    benchmark mode appends the answer-format instruction."""
    if mode not in ("grounded", "standalone"):
        raise ValueError(f"unknown prompt mode {mode!r}")
    prompt = SYSTEM_PROMPT_GROUNDED if mode == "grounded" else SYSTEM_PROMPT_STANDALONE
    if benchmark:
        prompt += "\n" + ANSWER_FORMAT_LINE
    return prompt


@dataclass
class SessionConfig:
    session_kind: str = toolkit.GRAPH_SESSION
    max_rounds: int = 16
    context_budget_tokens: int = 8192
    budget_margin: float = 0.9
    model: str = "gpt-4-0613"
    temperature: float = 0.0
    hamilton_time_budget: float | None = 30.0

    def __post_init__(self):
        if self.max_rounds < 1:
            raise ValueError("max_rounds must be at least 1")
        if self.context_budget_tokens <= 0:
            raise ValueError("context_budget_tokens must be positive")

    def chat_params(self) -> ChatParams:
        return ChatParams(
            model=self.model,
            temperature=self.temperature,
            context_budget_tokens=self.context_budget_tokens,
            budget_margin=self.budget_margin,
        )


@dataclass
class SessionOutcome:
    transcript: list[ChatMessage]
    final_text: str | None
    termination: str
    rounds_used: int
    wall_time: float
    tool_call_count: int

    def to_json(self) -> dict:
        return {
            "final_text": self.final_text,
            "termination": self.termination,
            "rounds_used": self.rounds_used,
            "tool_call_count": self.tool_call_count,
            "transcript": [m.to_json() for m in self.transcript],
        }


@dataclass
class SessionEvent:
    kind: str
    payload: dict = field(default_factory=dict)


class Session:
    """A live conversation: system prompt, tool catalog, and one state.

    ``send`` runs the loop for one user message until the assistant answers in
    prose or a budget trips; interactive surfaces call it repeatedly.
    """

    def __init__(
        self,
        config: SessionConfig,
        gateway,
        *,
        state: SessionState | None = None,
        system_prompt: str | None = None,
        grounded: bool = True,
        on_event=None,
    ):
        self.config = config
        self.gateway = gateway
        self.grounded = grounded
        self.state = state or SessionState(
            kind=config.session_kind, hamilton_time_budget=config.hamilton_time_budget
        )
        self.tools: list[ToolSpec] = tool_catalog(config.session_kind) if grounded else []
        prompt = system_prompt if system_prompt is not None else build_system_prompt(
            "grounded" if grounded else "standalone"
        )
        self.transcript: list[ChatMessage] = [ChatMessage(role=ROLE_SYSTEM, content=prompt)]
        self.tool_call_count = 0
        self.rounds_total = 0
        self.on_event = on_event

    def _emit(self, kind: str, payload: dict) -> None:
        if self.on_event is not None:
            self.on_event(SessionEvent(kind=kind, payload=payload))

    def send(self, user_text: str) -> SessionOutcome:
        start = time.perf_counter()
        params = self.config.chat_params()
        self.transcript.append(ChatMessage(role=ROLE_USER, content=user_text))
        self._emit(EVENT_USER_MESSAGE, {"text": user_text})
        rounds = 0
        final_text: str | None = None
        termination = TERMINATION_ROUNDS
        while True:
            if over_budget(self.transcript, self.tools, params):
                termination = TERMINATION_CONTEXT
                break
            if rounds >= self.config.max_rounds:
                termination = TERMINATION_ROUNDS
                break
            try:
                turn = self.gateway.chat(self.transcript, self.tools, params)
            except GatewayError as exc:
                termination = TERMINATION_TRANSPORT
                self._emit(EVENT_ASSISTANT_TEXT, {"text": f"[transport failure: {exc}]"})
                break
            rounds += 1
            if turn.finish_reason == FINISH_LENGTH:
                termination = TERMINATION_CONTEXT
                break
            self.transcript.append(
                ChatMessage(role=ROLE_ASSISTANT, content=turn.text, tool_calls=turn.tool_calls or None)
            )
            if turn.text:
                self._emit(EVENT_ASSISTANT_TEXT, {"text": turn.text})
            if not turn.tool_calls:
                final_text = turn.text
                termination = TERMINATION_FINAL
                break
            for call in turn.tool_calls:
                self._emit(EVENT_TOOL_CALL, {"id": call.id, "name": call.name, "arguments": call.arguments})
                result = dispatch(self.state, call)
                self.tool_call_count += 1
                rendered = result.render()
                self.transcript.append(
                    ChatMessage(role=ROLE_TOOL, content=rendered, tool_call_id=call.id)
                )
                self._emit(
                    EVENT_TOOL_RESULT,
                    {
                        "id": call.id,
                        "name": result.call_name,
                        "status": result.status,
                        "payload": result.payload,
                        "error": result.error,
                        "notices": result.notices,
                        "text": rendered,
                    },
                )
                if result.graph_mutated:
                    self._emit(EVENT_GRAPH_SNAPSHOT, self.state.graph_snapshot())
        self.rounds_total += rounds
        outcome = SessionOutcome(
            transcript=list(self.transcript),
            final_text=final_text,
            termination=termination,
            rounds_used=rounds,
            wall_time=time.perf_counter() - start,
            tool_call_count=self.tool_call_count,
        )
        self._emit(EVENT_TERMINATION, {"termination": termination, "rounds_used": rounds,
                                       "final_text": final_text})
        return outcome


def run_session(
    user_prompt: str,
    config: SessionConfig,
    gateway,
    *,
    state: SessionState | None = None,
    system_prompt: str | None = None,
    grounded: bool = True,
    on_event=None,
) -> SessionOutcome:
    """One-shot session: a single user prompt driven to termination."""
    session = Session(
        config,
        gateway,
        state=state,
        system_prompt=system_prompt,
        grounded=grounded,
        on_event=on_event,
    )
    return session.send(user_prompt)
