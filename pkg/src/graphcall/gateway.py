"""Uniform chat interface over a live chat-completions endpoint and a
deterministic scripted backend that replays recorded assistant turns.

The scripted backend is what makes the whole engine testable offline: a
ScriptedPolicy is a fixed sequence of assistant turns, so replaying the same
conversation always produces the same transcript, byte for byte.
"""

from __future__ import annotations

import json
import math
import os
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

import httpx

from .toolkit import ToolCall, ToolSpec

ROLE_SYSTEM = "system"
ROLE_USER = "user"
ROLE_ASSISTANT = "assistant"
ROLE_TOOL = "tool"

FINISH_STOP = "stop"
FINISH_TOOL_CALLS = "tool_calls"
FINISH_LENGTH = "length"


class GatewayError(Exception):
    """Transport failure that survived the retry policy."""


class ScriptExhausted(GatewayError):
    """The scripted policy ran out of turns: a test-fixture bug, not model behavior."""


class ScriptMismatch(GatewayError):
    """A scripted turn's guard did not match the observed tool result."""


@dataclass
class ChatMessage:
    role: str
    content: str | None = None
    tool_calls: list[ToolCall] | None = None
    tool_call_id: str | None = None

    def to_json(self) -> dict:
        out: dict = {"role": self.role, "content": self.content}
        if self.tool_calls:
            out["tool_calls"] = [
                {
                    "id": c.id,
                    "type": "function",
                    "function": {
                        "name": c.name,
                        "arguments": c.arguments if isinstance(c.arguments, str) else json.dumps(c.arguments),
                    },
                }
                for c in self.tool_calls
            ]
        if self.tool_call_id is not None:
            out["tool_call_id"] = self.tool_call_id
        return out

    @classmethod
    def from_json(cls, data: dict) -> "ChatMessage":
        calls = None
        if data.get("tool_calls"):
            calls = [
                ToolCall(
                    name=c["function"]["name"],
                    arguments=c["function"].get("arguments"),
                    id=c.get("id"),
                )
                for c in data["tool_calls"]
            ]
        return cls(
            role=data["role"],
            content=data.get("content"),
            tool_calls=calls,
            tool_call_id=data.get("tool_call_id"),
        )


@dataclass
class AssistantTurn:
    text: str | None = None
    tool_calls: list[ToolCall] = field(default_factory=list)
    finish_reason: str = FINISH_STOP

    def __post_init__(self):
        if self.finish_reason != FINISH_LENGTH:
            self.finish_reason = FINISH_TOOL_CALLS if self.tool_calls else FINISH_STOP


@dataclass
class ChatParams:
    model: str = "gpt-4-0613"
    temperature: float = 0.0
    context_budget_tokens: int = 8192
    budget_margin: float = 0.9


def estimate_tokens(messages: list[ChatMessage], tools: list[ToolSpec] | None = None) -> int:
    """Character-quarter estimate; enough to classify oversized prompts."""
    chars = sum(len(json.dumps(m.to_json())) for m in messages)
    if tools:
        chars += sum(len(json.dumps(t.to_json())) for t in tools)
    return math.ceil(chars / 4)


def over_budget(messages: list[ChatMessage], tools: list[ToolSpec] | None, params: ChatParams) -> bool:
    return estimate_tokens(messages, tools) > params.context_budget_tokens * params.budget_margin


# -- scripted backend -----------------------------------------------------------


@dataclass
class ScriptStep:
    """One scripted assistant turn: optional prose, tool calls as (name, args)
    pairs, and an optional guard on the previous tool reply."""

    text: str | None = None
    calls: list[tuple[str, dict]] = field(default_factory=list)
    expect_in_last_tool_result: str | None = None


@dataclass
class ScriptedPolicy:
    steps: list[ScriptStep]
    cycle: bool = False

    @classmethod
    def from_transcript(cls, messages: list[ChatMessage]) -> "ScriptedPolicy":
        steps = []
        for m in messages:
            if m.role != ROLE_ASSISTANT:
                continue
            calls = [(c.name, json.loads(c.arguments) if isinstance(c.arguments, str) else (c.arguments or {}))
                     for c in (m.tool_calls or [])]
            steps.append(ScriptStep(text=m.content, calls=calls))
        return cls(steps=steps)


class ScriptedGateway:
    """Replays a ScriptedPolicy turn by turn; bit-deterministic."""

    def __init__(self, policy: ScriptedPolicy):
        self.policy = policy
        self._index = 0
        self._call_counter = 0
        self.chat_count = 0

    def chat(self, messages: list[ChatMessage], tools: list[ToolSpec], params: ChatParams) -> AssistantTurn:
        if not messages:
            raise GatewayError("cannot chat with an empty message list")
        self.chat_count += 1
        if self._index >= len(self.policy.steps):
            if self.policy.cycle and self.policy.steps:
                self._index = 0
            else:
                raise ScriptExhausted(
                    f"script exhausted after {len(self.policy.steps)} turns; "
                    "the fixture has fewer turns than the session requested"
                )
        step = self.policy.steps[self._index]
        self._index += 1
        if step.expect_in_last_tool_result is not None:
            last_tool = next((m for m in reversed(messages) if m.role == ROLE_TOOL), None)
            seen = last_tool.content if last_tool else None
            if seen is None or step.expect_in_last_tool_result not in seen:
                raise ScriptMismatch(
                    f"scripted turn expected {step.expect_in_last_tool_result!r} "
                    f"in the last tool result, got {seen!r}"
                )
        calls = []
        for name, args in step.calls:
            calls.append(ToolCall(name=name, arguments=json.dumps(args), id=f"call_{self._call_counter}"))
            self._call_counter += 1
        return AssistantTurn(text=step.text, tool_calls=calls)


# -- live backend -----------------------------------------------------------------


@dataclass
class LiveConfig:
    base_url: str = "https://api.openai.com/v1"
    api_key_env: str = "GRAPHCALL_API_KEY"
    timeout: float = 60.0
    max_attempts: int = 3
    backoff_base: float = 1.0
    requests_per_second: float | None = None  # None disables rate limiting
    burst: int = 4


class TokenBucket:
    """Thread-safe token bucket; acquire() blocks until a token is available."""

    def __init__(self, rate: float, burst: int):
        if rate <= 0 or burst < 1:
            raise ValueError("rate must be positive and burst at least 1")
        self.rate = rate
        self.capacity = float(burst)
        self._tokens = float(burst)
        self._stamp = time.monotonic()
        self._lock = threading.Lock()

    def acquire(self) -> float:
        """Take one token, sleeping if none are ready; returns the wait time."""
        waited = 0.0
        while True:
            with self._lock:
                now = time.monotonic()
                self._tokens = min(self.capacity, self._tokens + (now - self._stamp) * self.rate)
                self._stamp = now
                if self._tokens >= 1.0:
                    self._tokens -= 1.0
                    return waited
                shortfall = (1.0 - self._tokens) / self.rate
            time.sleep(shortfall)
            waited += shortfall


class LiveGateway:
    """One HTTP round trip per chat call, with retry on transport/5xx failures.

    Instances are shareable across concurrent sessions; the optional token
    bucket throttles the shared request rate.
    """

    def __init__(self, config: LiveConfig | None = None, transport: httpx.BaseTransport | None = None):
        self.config = config or LiveConfig()
        self._client = httpx.Client(
            base_url=self.config.base_url,
            timeout=self.config.timeout,
            transport=transport,
        )
        self._bucket = (
            TokenBucket(self.config.requests_per_second, self.config.burst)
            if self.config.requests_per_second
            else None
        )
        self.request_count = 0

    def chat(self, messages: list[ChatMessage], tools: list[ToolSpec], params: ChatParams) -> AssistantTurn:
        if not messages:
            raise GatewayError("cannot chat with an empty message list")
        if over_budget(messages, tools, params):
            return AssistantTurn(finish_reason=FINISH_LENGTH)
        body: dict = {
            "model": params.model,
            "messages": [m.to_json() for m in messages],
            "temperature": params.temperature,
        }
        if tools:
            body["tools"] = [{"type": "function", "function": t.to_json()} for t in tools]
        headers = {}
        api_key = os.environ.get(self.config.api_key_env, "")
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        last_error: Exception | None = None
        for attempt in range(self.config.max_attempts):
            if attempt:
                time.sleep(self.config.backoff_base * 2 ** (attempt - 1))
            if self._bucket is not None:
                self._bucket.acquire()
            try:
                self.request_count += 1
                response = self._client.post("/chat/completions", json=body, headers=headers)
            except httpx.HTTPError as exc:
                last_error = exc
                continue
            if response.status_code >= 500:
                last_error = GatewayError(f"server error {response.status_code}")
                continue
            if response.status_code != 200:
                raise GatewayError(f"chat endpoint returned {response.status_code}: {response.text[:400]}")
            return self._parse(response.json())
        raise GatewayError(f"chat request failed after {self.config.max_attempts} attempts: {last_error}")

    @staticmethod
    def _parse(data: dict) -> AssistantTurn:
        try:
            choice = data["choices"][0]
            message = choice["message"]
        except (KeyError, IndexError) as exc:
            raise GatewayError(f"malformed chat response: {exc}") from exc
        finish = choice.get("finish_reason") or FINISH_STOP
        calls = []
        for c in message.get("tool_calls") or []:
            calls.append(ToolCall(
                name=c.get("function", {}).get("name", ""),
                arguments=c.get("function", {}).get("arguments"),
                id=c.get("id"),
            ))
        return AssistantTurn(
            text=message.get("content"),
            tool_calls=calls,
            finish_reason=FINISH_LENGTH if finish == FINISH_LENGTH else
            (FINISH_TOOL_CALLS if calls else FINISH_STOP),
        )

    def close(self) -> None:
        self._client.close()


# -- transcript fixtures -------------------------------------------------------------


def record_transcript(messages: list[ChatMessage], path: str | Path) -> Path:
    """Write a session transcript as JSON lines, one message per line."""
    if not messages:
        raise ValueError("nothing to record: the transcript is empty")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        for m in messages:
            fh.write(json.dumps(m.to_json()) + "\n")
    return path


def load_transcript(path: str | Path) -> list[ChatMessage]:
    messages = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.strip():
            messages.append(ChatMessage.from_json(json.loads(line)))
    return messages
