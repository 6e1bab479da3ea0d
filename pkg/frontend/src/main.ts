// Browser bootstrap: bind the controller to the page, wire the forms.

import { ServiceClient } from "./api.js";
import { ConsoleController } from "./controller.js";
import { renderGraph, renderStatus, renderTrace } from "./render.js";
import type { ConsoleState } from "./types.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function render(state: ConsoleState): void {
  el("status").textContent = renderStatus(state);
  const trace = el("trace");
  trace.innerHTML = renderTrace(state.trace);
  trace.scrollTop = trace.scrollHeight;
  el("graph-panel").innerHTML = renderGraph(state.snapshot, state.environment);
  (el<HTMLButtonElement>("send")).disabled = state.thinking || state.finished;
}

async function boot(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const server = params.get("server") ?? `${window.location.protocol}//${window.location.host}`;
  const policy = params.get("policy");
  const client = new ServiceClient(server);
  const controller = new ConsoleController(client, render);

  try {
    await client.health();
  } catch (error) {
    el("status").textContent = `cannot reach ${server}: ${error}`;
    return;
  }

  const existing = params.get("session");
  if (existing) {
    controller.attach(existing);
  } else {
    const config: Record<string, unknown> = {};
    if (policy) config.policy = policy;
    await controller.connect(config);
    const url = new URL(window.location.href);
    url.searchParams.set("session", controller.state.sessionId ?? "");
    window.history.replaceState(null, "", url.toString());
  }

  el<HTMLFormElement>("message-form").addEventListener("submit", (e) => {
    e.preventDefault();
    const input = el<HTMLInputElement>("message");
    const text = input.value.trim();
    if (!text) return;
    input.value = "";
    void controller.send(text);
  });

  el<HTMLFormElement>("event-form").addEventListener("submit", (e) => {
    e.preventDefault();
    const kind = el<HTMLSelectElement>("event-kind").value;
    const location = el<HTMLInputElement>("event-location").value.trim();
    if (!location) return;
    void controller.injectEvent(kind, location).catch((error) => {
      el("status").textContent = `event rejected: ${error}`;
    });
  });
}

window.addEventListener("DOMContentLoaded", () => {
  void boot();
});
