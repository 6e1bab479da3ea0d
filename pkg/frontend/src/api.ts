// Thin typed client for the session HTTP API.  fetch is injectable so tests
// and non-browser hosts can drive it.

import type { GraphSnapshot, SessionEvent } from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

export class ServiceClient {
  private readonly fetchImpl: FetchLike;

  constructor(readonly baseUrl: string, fetchImpl?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    this.fetchImpl = fetchImpl ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method,
      headers: body === undefined ? undefined : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      let detail = `${response.status}`;
      try {
        const data = (await response.json()) as { detail?: string };
        if (data.detail) detail = data.detail;
      } catch {
        // non-JSON error body; keep the status code
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  health(): Promise<{ status: string; version: string }> {
    return this.request("GET", "/health");
  }

  async createSession(kind: string, config: Record<string, unknown> = {}): Promise<string> {
    const data = await this.request<{ session_id: string }>("POST", "/sessions", { kind, config });
    return data.session_id;
  }

  sendMessage(sessionId: string, text: string): Promise<{ accepted: boolean }> {
    return this.request("POST", `/sessions/${sessionId}/message`, { text });
  }

  postWorldEvent(
    sessionId: string,
    kind: string,
    location: string,
    details: Record<string, unknown> = {},
  ): Promise<{ accepted: boolean }> {
    return this.request("POST", `/sessions/${sessionId}/world-event`, { kind, location, details });
  }

  getEvents(
    sessionId: string,
    since: number,
    timeoutSeconds = 10,
  ): Promise<{ events: SessionEvent[]; finished: boolean }> {
    const query = `since=${since}&timeout=${timeoutSeconds}`;
    return this.request("GET", `/sessions/${sessionId}/events?${query}`);
  }

  getGraph(sessionId: string): Promise<GraphSnapshot> {
    return this.request("GET", `/sessions/${sessionId}/graph`);
  }
}
