/**
 * Mind map rendering: the conversation tree as an SVG node-link diagram.
 *
 * Pure string output so the layout is testable without a DOM. Interaction
 * (zoom, pan, click-to-focus, the plus-icon follow-up affordance) is wired up
 * by main.ts through data attributes baked into the markup here.
 */

import type { ConversationHub, ConversationNode } from "./tree.js";

export interface MindMapOptions {
  /** Node to highlight as the current chat focus. */
  selected?: { dialogId: string; queryId: string } | null;
}

interface PlacedNode {
  node: ConversationNode;
  x: number;
  y: number;
  parent: PlacedNode | null;
  fromHub: boolean;
}

const H_GAP = 200;
const V_GAP = 54;
const MARGIN = 40;
const HUB_W = 96;
const HUB_H = 34;
const LABEL_MAX = 30;

function esc(value: string): string {
  return value
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function clip(text: string): string {
  return text.length > LABEL_MAX ? text.slice(0, LABEL_MAX - 3) + "..." : text;
}

// ── layout ──────────────────────────────────────────────────────────────

/**
 * Tidy-enough tree layout: leaves take consecutive rows, inner nodes center
 * on their children. Depth maps to x.
 */
function place(hub: ConversationHub): { placed: PlacedNode[]; width: number; height: number; hubY: number } {
  const placed: PlacedNode[] = [];
  let nextRow = 0;

  const descend = (node: ConversationNode, depth: number, parent: PlacedNode | null): PlacedNode => {
    const entry: PlacedNode = { node, x: MARGIN + HUB_W + depth * H_GAP, y: 0, parent, fromHub: parent === null };
    placed.push(entry);
    if (node.children.length === 0) {
      entry.y = MARGIN + nextRow * V_GAP;
      nextRow += 1;
    } else {
      const childYs = node.children.map((child) => descend(child, depth + 1, entry).y);
      entry.y = (Math.min(...childYs) + Math.max(...childYs)) / 2;
    }
    return entry;
  };

  for (const root of hub.children) descend(root, 1, null);

  const rows = Math.max(nextRow, 1);
  const maxX = placed.reduce((acc, p) => Math.max(acc, p.x), MARGIN + HUB_W);
  const width = maxX + H_GAP + MARGIN;
  const height = MARGIN * 2 + (rows - 1) * V_GAP + HUB_H;
  const rootYs = placed.filter((p) => p.fromHub).map((p) => p.y);
  const hubY = rootYs.length > 0 ? (Math.min(...rootYs) + Math.max(...rootYs)) / 2 : height / 2;
  return { placed, width, height, hubY };
}

// ── markup ──────────────────────────────────────────────────────────────

function linkPath(x1: number, y1: number, x2: number, y2: number): string {
  const mid = (x1 + x2) / 2;
  return `M ${x1} ${y1} C ${mid} ${y1}, ${mid} ${y2}, ${x2} ${y2}`;
}

function renderLink(entry: PlacedNode, hubX: number, hubY: number): string {
  const x1 = entry.parent ? entry.parent.x : hubX;
  const y1 = entry.parent ? entry.parent.y : hubY;
  const cls = entry.fromHub ? "mm-link mm-link--hub" : "mm-link";
  return `<path class="${cls}" d="${linkPath(x1, y1, entry.x, entry.y)}"/>`;
}

function renderNode(entry: PlacedNode, selected: MindMapOptions["selected"]): string {
  const { node } = entry;
  const classes = ["mm-node", `mm-node--${node.confidenceBadge}`];
  if (node.openAmbiguities.length > 0) classes.push("mm-node--open");
  if (selected && selected.dialogId === node.dialogId && selected.queryId === node.queryId) {
    classes.push("mm-node--selected");
  }
  const id = `${node.dialogId}/${node.queryId}`;
  return [
    `<g class="${classes.join(" ")}" transform="translate(${entry.x},${entry.y})"`,
    ` data-dialog="${esc(node.dialogId)}" data-query="${esc(node.queryId)}">`,
    `<title>${esc(`[${id}] ${node.query}`)}</title>`,
    `<circle class="mm-dot" r="7"/>`,
    `<text class="mm-label" x="13" y="-7">${esc(clip(node.query))}</text>`,
    `<text class="mm-id" x="13" y="7">${esc(id)}</text>`,
    // follow-up affordance; CSS reveals it on node hover
    `<g class="mm-plus" transform="translate(0,-18)"><circle r="8"/>`,
    `<path d="M -4 0 H 4 M 0 -4 V 4"/></g>`,
    `</g>`,
  ].join("");
}

export function renderMindMap(hub: ConversationHub, options: MindMapOptions = {}): string {
  const { placed, width, height, hubY } = place(hub);
  const hubX = MARGIN + HUB_W / 2;

  const parts: string[] = [];
  parts.push(`<svg class="mindmap" viewBox="0 0 ${width} ${height}" xmlns="http://www.w3.org/2000/svg">`);
  for (const entry of placed) parts.push(renderLink(entry, MARGIN + HUB_W, hubY));
  parts.push(
    `<g class="mm-hub" transform="translate(${hubX},${hubY})">`,
    `<rect x="${-HUB_W / 2}" y="${-HUB_H / 2}" width="${HUB_W}" height="${HUB_H}" rx="8"/>`,
    `<text>${esc(hub.label)}</text>`,
    `</g>`,
  );
  for (const entry of placed) parts.push(renderNode(entry, options.selected ?? null));
  parts.push(`</svg>`);
  return parts.join("");
}
