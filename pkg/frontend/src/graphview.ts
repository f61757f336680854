/** SVG rendering of a metric graph: force layout, labeled edges, parallel
 * edges drawn as arcs. */

import type { GraphDoc, LengthSpec } from "./api.js";
import { layoutGraph } from "./layout.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export function edgeLabel(len: LengthSpec): string {
  if (typeof len === "number") {
    return len.toPrecision(3);
  }
  return len.scale === 1 ? len.param : `${len.scale.toPrecision(3)}·${len.param}`;
}

/** Arc offsets for a bundle of parallel edges: 0 for a single edge, spread
 * symmetrically otherwise. */
export function parallelOffsets(count: number): number[] {
  if (count === 1) return [0];
  const out: number[] = [];
  for (let i = 0; i < count; i++) {
    out.push((i - (count - 1) / 2) * 0.35);
  }
  return out;
}

export function renderGraph(svg: SVGSVGElement, graph: GraphDoc, size = 340): void {
  svg.replaceChildren();
  svg.setAttribute("viewBox", `0 0 ${size} ${size}`);
  const pad = 30;
  const pos = layoutGraph(graph).map((p) => ({
    x: pad + p.x * (size - 2 * pad),
    y: pad + p.y * (size - 2 * pad),
  }));

  const bundles = new Map<string, number[]>();
  graph.edges.forEach((e, i) => {
    const key = `${Math.min(e.u, e.v)}-${Math.max(e.u, e.v)}`;
    const got = bundles.get(key);
    if (got) got.push(i);
    else bundles.set(key, [i]);
  });

  const make = (tag: string, attrs: Record<string, string | number>) => {
    const node = document.createElementNS(SVG_NS, tag);
    for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, String(value));
    svg.append(node);
    return node;
  };

  for (const indices of bundles.values()) {
    const offsets = parallelOffsets(indices.length);
    indices.forEach((edgeIndex, slot) => {
      const e = graph.edges[edgeIndex];
      const a = pos[e.u];
      const b = pos[e.v];
      const mx = (a.x + b.x) / 2;
      const my = (a.y + b.y) / 2;
      const dx = b.x - a.x;
      const dy = b.y - a.y;
      const cx = mx - dy * offsets[slot];
      const cy = my + dx * offsets[slot];
      make("path", {
        d: `M${a.x.toFixed(1)},${a.y.toFixed(1)} Q${cx.toFixed(1)},${cy.toFixed(1)} ${b.x.toFixed(1)},${b.y.toFixed(1)}`,
        class: "edge",
        fill: "none",
      });
      const label = make("text", {
        x: (mx + cx) / 2, y: (my + cy) / 2 - 3, class: "edge-label",
        "text-anchor": "middle",
      });
      label.textContent = edgeLabel(e.len);
    });
  }

  pos.forEach((p, i) => {
    make("circle", { cx: p.x, cy: p.y, r: 9, class: "vertex" });
    const label = make("text", {
      x: p.x, y: p.y + 3.5, class: "vertex-label", "text-anchor": "middle",
    });
    label.textContent = String(i);
  });
}
