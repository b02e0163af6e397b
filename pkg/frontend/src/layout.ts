/** Deterministic layered layout.
 *
 * Nodes are assigned to layers by breadth-first distance and ordered
 * within a layer by node id, so the same document always yields the
 * same coordinates (stable screenshots, diffable output).
 *
 * Layer direction follows the document kind: ends-means maps and value
 * trees grow away from the fundamental value (root on top); the signed
 * map kinds point *toward* the fundamental value, so distances are
 * measured against the arc direction to keep it on top as well.
 */

import type { MapDocumentJson } from "./types";

export interface NodePosition {
  x: number;
  y: number;
  layer: number;
}

export interface Layout {
  positions: Map<string, NodePosition>;
  width: number;
  height: number;
}

export const X_SPACING = 180;
export const Y_SPACING = 110;

function bfsLayers(
  ids: string[],
  succ: Map<string, string[]>,
  roots: string[],
): Map<string, number> {
  const layer = new Map<string, number>();
  let frontier = [...roots].sort();
  for (const r of frontier) layer.set(r, 0);
  let depth = 0;
  while (frontier.length > 0) {
    depth += 1;
    const next: string[] = [];
    for (const n of frontier) {
      for (const m of succ.get(n) ?? []) {
        if (!layer.has(m)) {
          layer.set(m, depth);
          next.push(m);
        }
      }
    }
    frontier = next.sort();
  }
  // anything unreachable (possible mid-pipeline) goes below everything else
  const fallback = depth + 1;
  for (const id of ids) if (!layer.has(id)) layer.set(id, fallback);
  return layer;
}

export function layeredLayout(doc: MapDocumentJson): Layout {
  const ids = doc.nodes.map((n) => n.id).sort();
  const downstream = doc.kind === "ends_means_map" || doc.kind === "value_tree";
  const succ = new Map<string, string[]>();
  for (const a of doc.arcs) {
    const [from, to] = downstream ? [a.from, a.to] : [a.to, a.from];
    const list = succ.get(from) ?? [];
    list.push(to);
    succ.set(from, list);
  }
  for (const list of succ.values()) list.sort();

  let roots: string[];
  if (doc.fundamental !== undefined) {
    roots = [doc.fundamental];
  } else {
    // plain cognitive map: start from its sinks (no outgoing arcs)
    const hasOut = new Set(doc.arcs.map((a) => a.from));
    roots = ids.filter((id) => !hasOut.has(id));
    if (roots.length === 0) roots = ids.slice(0, 1);
  }

  const layers = bfsLayers(ids, succ, roots);
  const byLayer = new Map<number, string[]>();
  for (const id of ids) {
    const l = layers.get(id)!;
    const list = byLayer.get(l) ?? [];
    list.push(id);
    byLayer.set(l, list);
  }

  const positions = new Map<string, NodePosition>();
  const widest = Math.max(...[...byLayer.values()].map((l) => l.length));
  const width = widest * X_SPACING;
  let height = 0;
  for (const [l, members] of [...byLayer.entries()].sort((a, b) => a[0] - b[0])) {
    members.sort();
    const offset = (width - members.length * X_SPACING) / 2;
    members.forEach((id, i) => {
      positions.set(id, {
        x: offset + i * X_SPACING + X_SPACING / 2,
        y: l * Y_SPACING + Y_SPACING / 2,
        layer: l,
      });
    });
    height = Math.max(height, (l + 1) * Y_SPACING);
  }
  return { positions, width, height };
}
