/**
 * Conversation tree construction from the dialog store JSON.
 *
 * The store is a flat map of dialogId -> ordered query results. Dialog ids
 * follow the grammar `\d+(\.\d+\.\d+)*`: a branch id "d.q.b" names the b-th
 * branch hanging off query q of dialog d, and d itself may already be a
 * branch id. This module re-inflates that flat map into the node-link tree
 * the mind map draws, with every dialog rooted at a shared "Dataset" hub.
 *
 * Everything here is pure and DOM-free so reloading the page and re-fetching
 * the store reconstructs the identical tree.
 */

import type { Confidence, DialogStoreJson, GrammarSpec, QueryResult } from "./types.js";

export interface OpenAmbiguityRef {
  kind: "attribute" | "value";
  phrase: string;
}

export interface ConversationNode {
  dialogId: string;
  queryId: string;
  query: string;
  /** visList[0].grammarSpec verbatim, or null while ambiguities block it. */
  renderedSpec: GrammarSpec | null;
  confidenceBadge: Confidence;
  openAmbiguities: OpenAmbiguityRef[];
  children: ConversationNode[];
}

/** The mind map root: not a query itself, just the dataset anchor. */
export interface ConversationHub {
  label: string;
  children: ConversationNode[];
}

export interface ParsedDialogId {
  /** null for top-level dialogs. */
  branchPoint: { dialogId: string; queryId: string } | null;
  branchIndex: number | null;
}

const ID_GRAMMAR = /^\d+(\.\d+\.\d+)*$/;

/** Split "d.q.b" into its branch point; top-level ids have none. */
export function parseDialogId(dialogId: string): ParsedDialogId {
  if (!ID_GRAMMAR.test(dialogId)) {
    throw new Error(`dialog id ${JSON.stringify(dialogId)} does not match the id grammar`);
  }
  const parts = dialogId.split(".");
  if (parts.length === 1) {
    return { branchPoint: null, branchIndex: null };
  }
  return {
    branchPoint: {
      dialogId: parts.slice(0, -2).join("."),
      queryId: parts[parts.length - 2],
    },
    branchIndex: Number(parts[parts.length - 1]),
  };
}

export function nodeKey(dialogId: string, queryId: string): string {
  return `${dialogId}:${queryId}`;
}

export function openAmbiguityRefs(result: QueryResult): OpenAmbiguityRef[] {
  const refs: OpenAmbiguityRef[] = [];
  for (const kind of ["attribute", "value"] as const) {
    const group = result.ambiguities[kind] ?? {};
    for (const [phrase, entry] of Object.entries(group)) {
      if (entry.selected === null) refs.push({ kind, phrase });
    }
  }
  return refs;
}

function toNode(result: QueryResult): ConversationNode {
  return {
    dialogId: result.dialogId,
    queryId: result.queryId,
    query: result.query,
    renderedSpec: result.visList.length > 0 ? result.visList[0].grammarSpec : null,
    confidenceBadge: result.followUpConfidence,
    openAmbiguities: openAmbiguityRefs(result),
    children: [],
  };
}

/**
 * Build the hub-rooted tree.
 *
 * Children ordering mirrors the store: within a dialog each query's node gets
 * the next query as its first child (the dialog is a chain), and branch
 * dialogs attach after it, grouped per branch dialogId in branch-index order.
 * We sort ids numerically instead of trusting JS object key order, which
 * reshuffles integer-like keys.
 */
export function buildConversationTree(store: DialogStoreJson): ConversationHub {
  const nodes = new Map<string, ConversationNode>();
  const dialogIds = Object.keys(store).sort(compareDialogIds);

  for (const dialogId of dialogIds) {
    for (const result of store[dialogId]) {
      nodes.set(nodeKey(result.dialogId, result.queryId), toNode(result));
    }
  }

  // chain continuations first so each branch list starts after them
  for (const dialogId of dialogIds) {
    const results = store[dialogId];
    for (let i = 1; i < results.length; i++) {
      const parent = nodes.get(nodeKey(results[i - 1].dialogId, results[i - 1].queryId));
      const child = nodes.get(nodeKey(results[i].dialogId, results[i].queryId));
      if (parent && child) parent.children.push(child);
    }
  }

  const hub: ConversationHub = { label: "Dataset", children: [] };
  for (const dialogId of dialogIds) {
    const root = nodes.get(nodeKey(dialogId, store[dialogId][0].queryId));
    if (!root) continue;
    const { branchPoint } = parseDialogId(dialogId);
    if (branchPoint === null) {
      hub.children.push(root);
      continue;
    }
    const anchor = nodes.get(nodeKey(branchPoint.dialogId, branchPoint.queryId));
    if (!anchor) {
      throw new Error(`branch ${dialogId} references missing node ${branchPoint.dialogId}/${branchPoint.queryId}`);
    }
    anchor.children.push(root);
  }
  return hub;
}

/**
 * Creation order: top-level dialogs by numeric id, branch ids after their
 * base dialog, grouped by branch point and then branch index.
 */
export function compareDialogIds(a: string, b: string): number {
  const left = a.split(".").map(Number);
  const right = b.split(".").map(Number);
  const length = Math.min(left.length, right.length);
  for (let i = 0; i < length; i++) {
    if (left[i] !== right[i]) return left[i] - right[i];
  }
  return left.length - right.length;
}

/** Depth-first walk over every query node. */
export function walkTree(hub: ConversationHub, visit: (node: ConversationNode, depth: number) => void): void {
  const descend = (node: ConversationNode, depth: number) => {
    visit(node, depth);
    for (const child of node.children) descend(child, depth + 1);
  };
  for (const root of hub.children) descend(root, 1);
}

export function findNode(hub: ConversationHub, dialogId: string, queryId: string): ConversationNode | null {
  let found: ConversationNode | null = null;
  walkTree(hub, (node) => {
    if (node.dialogId === dialogId && node.queryId === queryId) found = node;
  });
  return found;
}
