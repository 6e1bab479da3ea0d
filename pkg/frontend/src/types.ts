// Shared shapes for the console: the server's event wire format and the
// derived view state.

export interface SessionEvent {
  seq: number;
  kind: string;
  payload: Record<string, unknown>;
  timestamp: number;
}

export interface GraphEdge {
  u: number;
  v: number;
  weight: number;
}

export interface GraphSnapshot {
  directed: boolean | null;
  weighted: boolean | null;
  nodes: number[];
  edges: GraphEdge[];
}

export interface Relationship {
  type: "obstacle" | "survivor" | "robot";
  location: string;
  hazard?: string;
  injury_level?: string;
  status?: string;
}

export interface Environment {
  entities: string[];
  locations: string[];
  relationships: Relationship[];
  constraints: string[];
}

export type TraceTone = "user" | "assistant" | "call" | "result" | "error" | "event" | "meta";

export interface TraceEntry {
  seq: number;
  tone: TraceTone;
  text: string;
}

export interface ConsoleState {
  sessionId: string | null;
  cursor: number;
  trace: TraceEntry[];
  snapshot: GraphSnapshot | null;
  environment: Environment | null;
  turnsCompleted: number;
  finished: boolean;
  thinking: boolean;
  connectionError: string | null;
}
