/** Render view models to SVG text. Pure string output, so the exact
 * markup is testable without a DOM. */

import type { CompareView, GraphView, NodeView } from "./viewmodel";

const NODE_W = 150;
const NODE_H = 46;

function esc(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function nodeClasses(n: NodeView): string {
  const cls = ["node"];
  if (n.negated) cls.push("negated");
  if (n.fundamental) cls.push("fundamental");
  if (n.provenance === "merged") cls.push("merged");
  if (n.provenance === "split") cls.push("split");
  if (n.highlight === "conflict") cls.push("conflict");
  if (n.highlight === "predecessor") cls.push("predecessor");
  return cls.join(" ");
}

function renderNode(n: NodeView): string {
  const x = n.x - NODE_W / 2;
  const y = n.y - NODE_H / 2;
  const rect =
    `<rect x="${x}" y="${y}" width="${NODE_W}" height="${NODE_H}" rx="6"` +
    (n.negated ? ' stroke-dasharray="6 3"' : "") +
    "/>";
  const ring = n.fundamental
    ? `<rect x="${x - 4}" y="${y - 4}" width="${NODE_W + 8}" height="${NODE_H + 8}" rx="8" fill="none"/>`
    : "";
  return (
    `<g class="${nodeClasses(n)}" data-id="${esc(n.id)}">` +
    ring +
    rect +
    `<text x="${n.x}" y="${n.y + 4}" text-anchor="middle">${esc(n.label)}</text>` +
    "</g>"
  );
}

function renderArc(view: GraphView, from: string, to: string, negative: boolean, highlight: boolean): string {
  const a = view.nodes.find((n) => n.id === from)!;
  const b = view.nodes.find((n) => n.id === to)!;
  const cls = ["arc", negative ? "negative" : "", highlight ? "highlight" : ""]
    .filter(Boolean)
    .join(" ");
  const dash = negative ? ' stroke-dasharray="8 4"' : "";
  const label = negative
    ? `<text x="${(a.x + b.x) / 2}" y="${(a.y + b.y) / 2}" text-anchor="middle">-</text>`
    : "";
  return (
    `<g class="${cls}" data-from="${esc(from)}" data-to="${esc(to)}">` +
    `<line x1="${a.x}" y1="${a.y + NODE_H / 2}" x2="${b.x}" y2="${b.y - NODE_H / 2}"${dash} marker-end="url(#arrow)"/>` +
    label +
    "</g>"
  );
}

const DEFS =
  '<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" ' +
  'markerWidth="7" markerHeight="7" orient="auto-start-reverse">' +
  '<path d="M 0 0 L 10 5 L 0 10 z"/></marker></defs>';

export function renderSvg(view: GraphView): string {
  const arcs = view.arcs.map((a) => renderArc(view, a.from, a.to, a.negative, a.highlight));
  const nodes = view.nodes.map(renderNode);
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${view.width} ${view.height}" ` +
    `class="map ${view.kind}">` +
    DEFS +
    arcs.join("") +
    nodes.join("") +
    "</svg>"
  );
}

export function renderCompareSvg(view: CompareView): string {
  const gap = 120;
  const width = view.left.width + gap + view.right.width;
  const height = Math.max(view.left.height, view.right.height);
  const shift = view.left.width + gap;
  const leftArcs = view.left.arcs.map((a) =>
    renderArc(view.left, a.from, a.to, a.negative, a.highlight),
  );
  const leftNodes = view.left.nodes.map(renderNode);
  const rightView = {
    ...view.right,
    nodes: view.right.nodes.map((n) => ({ ...n, x: n.x + shift })),
  };
  const rightArcs = rightView.arcs.map((a) =>
    renderArc(rightView, a.from, a.to, a.negative, a.highlight),
  );
  const rightNodes = rightView.nodes.map(renderNode);
  const links = view.links.map((l) => {
    const a = view.left.nodes.find((n) => n.id === l.fromId)!;
    const b = rightView.nodes.find((n) => n.id === l.toId)!;
    const title = `${l.labelA} ~ ${l.labelB} (${l.similarity.toFixed(2)})`;
    return (
      `<g class="link" data-similarity="${l.similarity}">` +
      `<title>${esc(title)}</title>` +
      `<line x1="${a.x + NODE_W / 2}" y1="${a.y}" x2="${b.x - NODE_W / 2}" y2="${b.y}" stroke-dasharray="2 4"/>` +
      "</g>"
    );
  });
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" class="compare">` +
    DEFS +
    leftArcs.join("") +
    rightArcs.join("") +
    links.join("") +
    leftNodes.join("") +
    rightNodes.join("") +
    "</svg>"
  );
}
