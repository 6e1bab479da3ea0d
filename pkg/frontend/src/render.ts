// Pure HTML/SVG string builders.  Rendering is a function of state alone,
// so identical states render identical markup; the replay tests pin this.

import { layoutGraph } from "./layout.js";
import type { ConsoleState, Environment, GraphSnapshot, TraceEntry } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderTrace(entries: TraceEntry[]): string {
  return entries
    .map((e) => `<div class="entry tone-${e.tone}" data-seq="${e.seq}">${escapeHtml(e.text)}</div>`)
    .join("\n");
}

// Location labels follow the reference sessions' convention "L<k>" -> node k;
// nodes without a matching label just get the neutral style.
function nodeClasses(id: number, env: Environment | null): string {
  const classes = ["node"];
  if (env) {
    const label = `L${id}`;
    for (const rel of env.relationships) {
      if (rel.location !== label) continue;
      if (rel.type === "obstacle" && rel.hazard === "fire") classes.push("hazard-fire");
      if (rel.type === "obstacle" && rel.hazard === "debris") classes.push("hazard-debris");
      if (rel.type === "survivor") classes.push(`survivor-${rel.injury_level}`);
      if (rel.type === "robot") classes.push("robot");
    }
  }
  return classes.join(" ");
}

export function renderGraph(
  snapshot: GraphSnapshot | null,
  env: Environment | null,
  width = 420,
  height = 320,
): string {
  if (!snapshot || snapshot.nodes.length === 0) {
    return `<svg class="graph" viewBox="0 0 ${width} ${height}"><text x="12" y="24" class="empty">no graph yet</text></svg>`;
  }
  const positions = layoutGraph(snapshot, width, height);
  const parts: string[] = [];
  for (const { u, v, weight } of snapshot.edges) {
    const a = positions.get(u);
    const b = positions.get(v);
    if (!a || !b) continue;
    parts.push(
      `<line class="edge" x1="${a.x.toFixed(1)}" y1="${a.y.toFixed(1)}" ` +
      `x2="${b.x.toFixed(1)}" y2="${b.y.toFixed(1)}"></line>`,
    );
    if (snapshot.weighted) {
      const mx = ((a.x + b.x) / 2).toFixed(1);
      const my = ((a.y + b.y) / 2).toFixed(1);
      parts.push(`<text class="weight" x="${mx}" y="${my}">${weight}</text>`);
    }
  }
  for (const id of snapshot.nodes) {
    const pos = positions.get(id)!;
    parts.push(
      `<circle class="${nodeClasses(id, env)}" data-node="${id}" ` +
      `cx="${pos.x.toFixed(1)}" cy="${pos.y.toFixed(1)}" r="13"></circle>`,
    );
    parts.push(
      `<text class="label" x="${pos.x.toFixed(1)}" y="${(pos.y + 4).toFixed(1)}">${id}</text>`,
    );
  }
  return `<svg class="graph" viewBox="0 0 ${width} ${height}">${parts.join("")}</svg>`;
}

export function renderStatus(state: ConsoleState): string {
  if (state.connectionError) return `error: ${escapeHtml(state.connectionError)}`;
  if (!state.sessionId) return "not connected";
  if (state.finished) return `session ${state.sessionId} finished`;
  if (state.thinking) return "model is thinking…";
  return `session ${state.sessionId} · ${state.turnsCompleted} turns`;
}
