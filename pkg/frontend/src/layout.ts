// Deterministic force-directed layout.  Node positions are seeded from the
// node ids themselves (not from a global RNG), so successive snapshots of
// the same graph land in the same places and the picture stays visually
// stable as the session mutates it.

import type { GraphSnapshot } from "./types.js";

export interface Point {
  x: number;
  y: number;
}

function hash32(value: number): number {
  let h = (value + 0x9e3779b9) >>> 0;
  h = Math.imul(h ^ (h >>> 16), 0x21f0aaad) >>> 0;
  h = Math.imul(h ^ (h >>> 15), 0x735a2d97) >>> 0;
  return (h ^ (h >>> 15)) >>> 0;
}

function seededUnit(id: number, salt: number): number {
  return hash32(id * 31 + salt) / 0xffffffff;
}

const ITERATIONS = 120;
const REPULSION = 0.08;
const SPRING = 0.04;
const CENTERING = 0.02;

export function layoutGraph(
  snapshot: GraphSnapshot,
  width = 420,
  height = 320,
): Map<number, Point> {
  const positions = new Map<number, Point>();
  const nodes = [...snapshot.nodes].sort((a, b) => a - b);
  if (nodes.length === 0) return positions;

  for (const id of nodes) {
    const angle = seededUnit(id, 1) * 2 * Math.PI;
    const radius = 0.25 + 0.2 * seededUnit(id, 2);
    positions.set(id, {
      x: 0.5 + radius * Math.cos(angle),
      y: 0.5 + radius * Math.sin(angle),
    });
  }

  const edges = snapshot.edges.filter((e) => e.u !== e.v);
  for (let step = 0; step < ITERATIONS; step++) {
    const cool = 1 - step / ITERATIONS;
    const force = new Map<number, Point>(nodes.map((id) => [id, { x: 0, y: 0 }]));
    for (let i = 0; i < nodes.length; i++) {
      for (let j = i + 1; j < nodes.length; j++) {
        const a = positions.get(nodes[i])!;
        const b = positions.get(nodes[j])!;
        let dx = a.x - b.x;
        let dy = a.y - b.y;
        if (Math.abs(dx) < 1e-6 && Math.abs(dy) < 1e-6) {
          // Coincident (e.g. both clamped into a corner): separate along a
          // direction seeded by the pair so the layout stays deterministic.
          const angle = seededUnit(nodes[i] * 37 + nodes[j], 3) * 2 * Math.PI;
          dx = Math.cos(angle) * 1e-3;
          dy = Math.sin(angle) * 1e-3;
        }
        const d2 = Math.max(dx * dx + dy * dy, 1e-4);
        const push = (REPULSION * REPULSION) / d2 / Math.sqrt(d2);
        force.get(nodes[i])!.x += dx * push;
        force.get(nodes[i])!.y += dy * push;
        force.get(nodes[j])!.x -= dx * push;
        force.get(nodes[j])!.y -= dy * push;
      }
    }
    for (const { u, v } of edges) {
      const a = positions.get(u)!;
      const b = positions.get(v)!;
      const dx = b.x - a.x;
      const dy = b.y - a.y;
      force.get(u)!.x += dx * SPRING;
      force.get(u)!.y += dy * SPRING;
      force.get(v)!.x -= dx * SPRING;
      force.get(v)!.y -= dy * SPRING;
    }
    for (const id of nodes) {
      const pos = positions.get(id)!;
      const f = force.get(id)!;
      f.x += (0.5 - pos.x) * CENTERING;
      f.y += (0.5 - pos.y) * CENTERING;
      pos.x = Math.min(0.96, Math.max(0.04, pos.x + f.x * cool));
      pos.y = Math.min(0.96, Math.max(0.04, pos.y + f.y * cool));
    }
  }

  const scaled = new Map<number, Point>();
  for (const [id, pos] of positions) {
    scaled.set(id, { x: pos.x * width, y: pos.y * height });
  }
  return scaled;
}
