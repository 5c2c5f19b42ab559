import { describe, expect, it } from "vitest";

import {
  buildConversationTree,
  compareDialogIds,
  findNode,
  openAmbiguityRefs,
  parseDialogId,
  walkTree,
} from "../src/tree.js";
import { mkDialog, mkResult, olympicsShapedResult, storeFixture } from "./helpers.js";

describe("parseDialogId", () => {
  it("treats plain integers as top-level dialogs", () => {
    expect(parseDialogId("0")).toEqual({ branchPoint: null, branchIndex: null });
    expect(parseDialogId("17")).toEqual({ branchPoint: null, branchIndex: null });
  });

  it("splits a branch id into its branch point and index", () => {
    expect(parseDialogId("0.1.0")).toEqual({
      branchPoint: { dialogId: "0", queryId: "1" },
      branchIndex: 0,
    });
  });

  it("keeps nested branch prefixes intact", () => {
    expect(parseDialogId("0.1.0.0.2")).toEqual({
      branchPoint: { dialogId: "0.1.0", queryId: "0" },
      branchIndex: 2,
    });
  });

  it("rejects ids outside the grammar", () => {
    for (const bad of ["", "x", "0.1", "0.1.2.3", "1.", ".1", "0.a.0"]) {
      expect(() => parseDialogId(bad), bad).toThrow(/grammar/);
    }
  });
});

describe("buildConversationTree", () => {
  it("renders an empty store as the hub alone", () => {
    const hub = buildConversationTree({});
    expect(hub.label).toBe("Dataset");
    expect(hub.children).toEqual([]);
  });

  it("chains the queries of one dialog", () => {
    const hub = buildConversationTree({ "0": mkDialog("0", 3) });
    expect(hub.children).toHaveLength(1);
    const root = hub.children[0];
    expect([root.dialogId, root.queryId]).toEqual(["0", "0"]);
    expect(root.children).toHaveLength(1);
    expect(root.children[0].queryId).toBe("1");
    expect(root.children[0].children[0].queryId).toBe("2");
  });

  it("gives every top-level dialog its own subtree off the hub", () => {
    const hub = buildConversationTree({
      "2": mkDialog("2", 1),
      "0": mkDialog("0", 2),
      "1": mkDialog("1", 1),
    });
    expect(hub.children.map((n) => n.dialogId)).toEqual(["0", "1", "2"]);
  });

  it("attaches a branch under its branch-point node", () => {
    const hub = buildConversationTree({
      "0": mkDialog("0", 3),
      "0.1.0": mkDialog("0.1.0", 1),
    });
    const anchor = findNode(hub, "0", "1");
    expect(anchor).not.toBeNull();
    expect(anchor!.children.map((n) => [n.dialogId, n.queryId])).toEqual([
      ["0", "2"],
      ["0.1.0", "0"],
    ]);
  });

  it("orders children as continuation first, then branches by index", () => {
    const hub = buildConversationTree(storeFixture());
    const anchor = findNode(hub, "0", "1")!;
    expect(anchor.children.map((n) => n.dialogId)).toEqual(["0", "0.1.0", "0.1.1"]);
    // branch dialogs chain internally like any other dialog
    const branch = findNode(hub, "0.1.0", "0")!;
    expect(branch.children.map((n) => [n.dialogId, n.queryId])).toEqual([
      ["0.1.0", "1"],
      ["0.1.0.0.0", "0"],
    ]);
  });

  it("raises on a branch whose anchor is missing", () => {
    expect(() =>
      buildConversationTree({ "0": mkDialog("0", 1), "0.4.0": mkDialog("0.4.0", 1) }),
    ).toThrow(/missing node/);
  });

  it("copies the top recommendation spec verbatim onto the node", () => {
    const result = mkResult("0", "0");
    const hub = buildConversationTree({ "0": [result] });
    expect(hub.children[0].renderedSpec).toBe(result.visList[0].grammarSpec);
  });

  it("leaves renderedSpec null while the result has no recommendations", () => {
    const hub = buildConversationTree({ "0": [olympicsShapedResult()] });
    expect(hub.children[0].renderedSpec).toBeNull();
    expect(hub.children[0].openAmbiguities).toHaveLength(3);
  });

  it("reconstructs the identical tree from the same store bytes", () => {
    const text = JSON.stringify(storeFixture());
    const first = buildConversationTree(JSON.parse(text));
    const second = buildConversationTree(JSON.parse(text));
    expect(second).toEqual(first);
  });

  it("walks depth first over every node", () => {
    const seen: string[] = [];
    walkTree(buildConversationTree(storeFixture()), (node, depth) => {
      seen.push(`${node.dialogId}/${node.queryId}@${depth}`);
    });
    expect(seen).toEqual([
      "0/0@1",
      "0/1@2",
      "0/2@3",
      "0.1.0/0@3",
      "0.1.0/1@4",
      "0.1.0.0.0/0@4",
      "0.1.1/0@3",
      "1/0@1",
    ]);
  });
});

describe("openAmbiguityRefs", () => {
  it("lists only the records still waiting for a selection", () => {
    const result = olympicsShapedResult();
    result.ambiguities.value!.hockey.selected = [{ attribute: "Sport", value: "Hockey" }];
    expect(openAmbiguityRefs(result)).toEqual([
      { kind: "attribute", phrase: "medals" },
      { kind: "value", phrase: "skating" },
    ]);
  });

  it("is empty for unambiguous results", () => {
    expect(openAmbiguityRefs(mkResult("0", "0"))).toEqual([]);
  });
});

describe("compareDialogIds", () => {
  it("sorts base dialogs before their branches, branches by point then index", () => {
    const ids = ["1", "0.1.1", "0", "0.1.0.0.0", "0.0.1", "0.1.0", "2", "0.0.0"];
    ids.sort(compareDialogIds);
    expect(ids).toEqual(["0", "0.0.0", "0.0.1", "0.1.0", "0.1.0.0.0", "0.1.1", "1", "2"]);
  });
});

describe("findNode", () => {
  it("returns null for ids absent from the tree", () => {
    expect(findNode(buildConversationTree(storeFixture()), "9", "0")).toBeNull();
  });
});
