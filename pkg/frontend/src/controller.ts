// Session driver: owns the long-poll loop and the state, notifies a render
// callback on every change.  No DOM access, so the same controller runs in
// the browser and headless in tests.

import { ApiError, ServiceClient } from "./api.js";
import { applyEvents, initialState } from "./state.js";
import type { ConsoleState } from "./types.js";

export type RenderCallback = (state: ConsoleState) => void;

const POLL_SECONDS = 5;

export class ConsoleController {
  state: ConsoleState = initialState();
  private running = false;
  private pollPromise: Promise<void> | null = null;

  constructor(
    private readonly client: ServiceClient,
    private readonly onChange: RenderCallback = () => undefined,
  ) {}

  private update(state: ConsoleState): void {
    this.state = state;
    this.onChange(state);
  }

  /** Create a fresh disaster session and start following its events. */
  async connect(config: Record<string, unknown> = {}): Promise<void> {
    const sessionId = await this.client.createSession("disaster", config);
    this.attach(sessionId);
  }

  /** Follow an existing session from seq 0 (page reload / reconnect). */
  attach(sessionId: string): void {
    this.update(initialState(sessionId));
    this.running = true;
    this.pollPromise = this.pollLoop();
  }

  private async pollLoop(): Promise<void> {
    while (this.running && this.state.sessionId) {
      try {
        const { events } = await this.client.getEvents(
          this.state.sessionId,
          this.state.cursor,
          POLL_SECONDS,
        );
        if (!this.running) return;
        if (events.length > 0) {
          this.update(applyEvents(this.state, events));
        }
        if (this.state.connectionError) {
          this.update({ ...this.state, connectionError: null });
        }
      } catch (error) {
        if (!this.running) return;
        this.update({ ...this.state, connectionError: String(error) });
        await sleep(1000);
      }
    }
  }

  async send(text: string): Promise<void> {
    if (!this.state.sessionId) throw new Error("not connected");
    try {
      await this.client.sendMessage(this.state.sessionId, text);
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        this.update({ ...this.state, thinking: true });
        return;
      }
      throw error;
    }
  }

  async injectEvent(
    kind: string,
    location: string,
    details: Record<string, unknown> = {},
  ): Promise<void> {
    if (!this.state.sessionId) throw new Error("not connected");
    await this.client.postWorldEvent(this.state.sessionId, kind, location, details);
  }

  /** Wait until the state satisfies a predicate (used by tests and bootstrapping). */
  async waitFor(predicate: (state: ConsoleState) => boolean, timeoutMs = 15000): Promise<void> {
    const deadline = Date.now() + timeoutMs;
    while (Date.now() < deadline) {
      if (predicate(this.state)) return;
      await sleep(25);
    }
    throw new Error(`timed out waiting for console state (cursor=${this.state.cursor})`);
  }

  async stop(): Promise<void> {
    this.running = false;
    if (this.pollPromise) {
      await Promise.race([this.pollPromise, sleep(POLL_SECONDS * 1000 + 500)]);
    }
  }
}

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}
