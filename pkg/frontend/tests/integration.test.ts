// End-to-end: spawn the Python session service, follow a scripted
// decision-support session through the real HTTP API, and check the two
// console-level acceptance behaviors (full-session replay and world-event
// injection) against live wire traffic.

import { ChildProcess, spawn } from "node:child_process";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ServiceClient } from "../src/api.js";
import { ConsoleController } from "../src/controller.js";
import { renderGraph, renderTrace } from "../src/render.js";
import type { ConsoleState } from "../src/types.js";

const DEPLOY = "Deploy rescue robots. There are survivors and fire hazards around collapsed buildings.";
const VICTIMS = "What are the locations of victims with critical health condition?";
const PRIORITIZE = "Prioritize saving victims in critical condition first.";

let server: ChildProcess;
let baseUrl: string;

function startServer(): Promise<string> {
  return new Promise((resolve, reject) => {
    server = spawn("python3", ["-m", "graphcall.cli", "serve", "--port", "0"], {
      stdio: ["ignore", "pipe", "pipe"],
    });
    let output = "";
    const onData = (chunk: Buffer) => {
      output += chunk.toString();
      const match = output.match(/listening on (http:\/\/[\d.]+:\d+)/);
      if (match) resolve(match[1]);
    };
    server.stdout!.on("data", onData);
    server.stderr!.on("data", onData);
    server.on("exit", (code) => reject(new Error(`server exited early (${code}): ${output}`)));
    setTimeout(() => reject(new Error(`server never reported its port: ${output}`)), 15000);
  });
}

async function waitForHealth(client: ServiceClient): Promise<void> {
  const deadline = Date.now() + 15000;
  while (Date.now() < deadline) {
    try {
      await client.health();
      return;
    } catch {
      await new Promise((r) => setTimeout(r, 150));
    }
  }
  throw new Error("service never became healthy");
}

beforeAll(async () => {
  baseUrl = await startServer();
  await waitForHealth(new ServiceClient(baseUrl));
}, 30000);

afterAll(() => {
  server?.kill();
});

function toolCalls(state: ConsoleState): string[] {
  return state.trace
    .filter((e) => e.tone === "call")
    .map((e) => e.text.replace(/^→ /, "").split("(")[0]);
}

describe("operator console against the live service", () => {
  it(
    "replays the whole decision-support session and reloads losslessly",
    { timeout: 60000 },
    async () => {
      const client = new ServiceClient(baseUrl);
      const console1 = new ConsoleController(client);
      await console1.connect({ policy: "disaster-demo" });
      expect(console1.state.sessionId).toBeTruthy();

      await console1.send(DEPLOY);
      await console1.waitFor((s) => s.turnsCompleted === 1);
      await console1.send(VICTIMS);
      await console1.waitFor((s) => s.turnsCompleted === 2);
      await console1.send(PRIORITIZE);
      await console1.waitFor((s) => s.turnsCompleted === 3);
      await console1.injectEvent("fire_expanded", "L2");
      await console1.waitFor((s) => s.turnsCompleted === 4);

      // The session's phases appear in order: environment fetch, graph
      // build, shortest paths, prioritization, fire event, deletion, replan.
      const calls = toolCalls(console1.state);
      const phases = [
        calls.indexOf("get_environment_data"),
        calls.indexOf("GraphLibrary_init"),
        calls.indexOf("add_edges"),
        calls.indexOf("find_shortest_path"),
        calls.indexOf("delete_node"),
      ];
      expect(Math.min(...phases)).toBeGreaterThanOrEqual(0);
      expect([...phases]).toEqual([...phases].sort((a, b) => a - b));
      expect(calls.filter((c) => c === "find_shortest_path").length).toBeGreaterThanOrEqual(9);

      const text = console1.state.trace.map((e) => e.text).join("\n");
      expect(text).toContain("you: " + VICTIMS);
      expect(text).toContain("located at\nL3 and L1".replace("\n", " "));
      expect(text).toContain("⚡ fire_expanded at L2");
      expect(text).toContain("no path exists");

      // Final snapshot no longer contains the burned location's node.
      expect(console1.state.snapshot).not.toBeNull();
      expect(console1.state.snapshot!.nodes).not.toContain(2);
      expect(console1.state.snapshot!.nodes).toContain(3);

      // "Reload": a second console attaches to the same session from seq 0
      // and must rebuild the identical rendered history and graph.
      const console2 = new ConsoleController(client);
      console2.attach(console1.state.sessionId!);
      await console2.waitFor((s) => s.cursor >= console1.state.cursor);
      expect(renderTrace(console2.state.trace)).toBe(renderTrace(console1.state.trace));
      expect(renderGraph(console2.state.snapshot, console2.state.environment))
        .toBe(renderGraph(console1.state.snapshot, console1.state.environment));
      expect(console2.state.turnsCompleted).toBe(console1.state.turnsCompleted);

      await console1.stop();
      await console2.stop();
    },
  );

  it(
    "world-event injection yields a WorldEvent entry then a node-2-free snapshot",
    { timeout: 60000 },
    async () => {
      const client = new ServiceClient(baseUrl);
      const console1 = new ConsoleController(client);
      await console1.connect({ policy: "disaster-demo" });
      await console1.send(DEPLOY);
      await console1.waitFor((s) => s.turnsCompleted === 1);
      await console1.send(VICTIMS);
      await console1.waitFor((s) => s.turnsCompleted === 2);
      await console1.send(PRIORITIZE);
      await console1.waitFor((s) => s.turnsCompleted === 3);

      const beforeInjection = console1.state.cursor;
      await console1.injectEvent("fire_expanded", "L2");
      await console1.waitFor((s) => s.turnsCompleted === 4);

      const tail = console1.state.trace.filter((e) => e.seq > beforeInjection);
      const eventIndex = tail.findIndex((e) => e.tone === "event" && e.text.includes("fire_expanded at L2"));
      expect(eventIndex).toBeGreaterThanOrEqual(0);
      const snapshotAfter = tail.findIndex(
        (e, i) => i > eventIndex && e.tone === "meta" && e.text.startsWith("· graph:"),
      );
      expect(snapshotAfter).toBeGreaterThan(eventIndex);
      expect(console1.state.snapshot!.nodes).not.toContain(2);

      // The environment mirror now paints L2 as a fire hazard.
      const svg = renderGraph(console1.state.snapshot, console1.state.environment);
      expect(svg).not.toMatch(/data-node="2"/);
      const l2 = console1.state.environment!.relationships.find(
        (r) => r.type === "obstacle" && r.location === "L2",
      );
      expect(l2?.hazard).toBe("fire");

      await console1.stop();
    },
  );

  it("surfaces server rejections", { timeout: 20000 }, async () => {
    const client = new ServiceClient(baseUrl);
    const console1 = new ConsoleController(client);
    await console1.connect({ policy: "disaster-demo" });
    await expect(console1.injectEvent("fire_expanded", "L99")).rejects.toThrow(/unknown location/);
    await console1.stop();
  });
});
