// Pure reducer from server events to view state.  Replaying the same events
// from seq 0 always rebuilds the identical state, which is what makes page
// reloads lossless.

import type {
  ConsoleState,
  Environment,
  GraphSnapshot,
  SessionEvent,
  TraceEntry,
} from "./types.js";

export function initialState(sessionId: string | null = null): ConsoleState {
  return {
    sessionId,
    cursor: 0,
    trace: [],
    snapshot: null,
    environment: null,
    turnsCompleted: 0,
    finished: false,
    thinking: false,
    connectionError: null,
  };
}

function entry(event: SessionEvent, tone: TraceEntry["tone"], text: string): TraceEntry {
  return { seq: event.seq, tone, text };
}

function describeArguments(raw: unknown): string {
  if (raw === null || raw === undefined || raw === "") return "{}";
  if (typeof raw === "string") return raw;
  return JSON.stringify(raw);
}

export function applyEvent(state: ConsoleState, event: SessionEvent): ConsoleState {
  if (event.seq <= state.cursor) return state; // already consumed
  const next: ConsoleState = { ...state, trace: [...state.trace], cursor: event.seq };
  const p = event.payload;
  switch (event.kind) {
    case "user_message":
      next.thinking = true;
      next.trace.push(entry(event, "user", `you: ${p.text}`));
      break;
    case "assistant_text":
      next.trace.push(entry(event, "assistant", `assistant: ${p.text}`));
      break;
    case "tool_call":
      next.trace.push(entry(event, "call", `→ ${p.name}(${describeArguments(p.arguments)})`));
      break;
    case "tool_result": {
      const failed = p.status === "error";
      next.trace.push(entry(event, failed ? "error" : "result", `← ${p.text}`));
      if (p.name === "get_environment_data" && !failed) {
        next.environment = p.payload as unknown as Environment;
      }
      break;
    }
    case "graph_snapshot": {
      const snapshot = p as unknown as GraphSnapshot;
      next.snapshot = snapshot;
      next.trace.push(entry(
        event,
        "meta",
        `· graph: ${snapshot.nodes.length} nodes, ${snapshot.edges.length} edges`,
      ));
      break;
    }
    case "world_event": {
      const problem = typeof p.error === "string" ? ` [rejected: ${p.error}]` : "";
      next.trace.push(entry(event, "event", `⚡ ${p.kind} at ${p.location}${problem}`));
      if (next.environment && !problem) {
        next.environment = applyEnvironmentEvent(next.environment, p);
      }
      break;
    }
    case "termination":
      next.thinking = false;
      next.turnsCompleted = state.turnsCompleted + 1;
      next.trace.push(entry(event, "meta", `· turn ended (${p.termination})`));
      if (p.termination === "context_limit" || p.termination === "transport_failure") {
        next.finished = true;
      }
      break;
    default:
      next.trace.push(entry(event, "meta", `· ${event.kind}`));
  }
  return next;
}

// Mirror the server's world mutations so hazard styling stays current even
// when the model never re-reads the environment.
function applyEnvironmentEvent(env: Environment, p: Record<string, unknown>): Environment {
  const kind = p.kind as string;
  const location = p.location as string;
  const relationships = env.relationships.map((r) => ({ ...r }));
  if (kind === "fire_expanded") {
    const obstacle = relationships.find((r) => r.type === "obstacle" && r.location === location);
    if (obstacle) obstacle.hazard = "fire";
    else relationships.push({ type: "obstacle", location, hazard: "fire" });
  } else if (kind === "debris_cleared") {
    const index = relationships.findIndex(
      (r) => r.type === "obstacle" && r.location === location && r.hazard === "debris",
    );
    if (index >= 0) relationships.splice(index, 1);
  } else if (kind === "survivor_rescued") {
    const index = relationships.findIndex(
      (r) => r.type === "survivor" && r.location === location,
    );
    if (index >= 0) relationships.splice(index, 1);
  } else if (kind === "robot_moved") {
    const details = (p.details ?? {}) as Record<string, unknown>;
    const robot = relationships.find(
      (r) => r.type === "robot" && r.location === details.from,
    );
    if (robot) robot.location = location;
  }
  return { ...env, relationships };
}

export function applyEvents(state: ConsoleState, events: SessionEvent[]): ConsoleState {
  let current = state;
  for (const event of events) current = applyEvent(current, event);
  return current;
}
