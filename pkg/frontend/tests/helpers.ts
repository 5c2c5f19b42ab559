/** Fixture builders shared across the test files. */

import type { DialogStoreJson, QueryResult, VisEntry } from "../src/types.js";

export function mkVis(markType = "bar"): VisEntry {
  return {
    score: 1.2,
    markType,
    attributes: ["Home Type", "Price"],
    tasks: ["find_extremum"],
    grammarSpec: {
      $schema: "https://vega.github.io/schema/vega-lite/v5.json",
      data: { values: [{ "Home Type": "Condo", Price: 285000 }] },
      mark: markType,
      encoding: {
        x: { field: "Home Type", type: "nominal" },
        y: { field: "Price", type: "quantitative" },
      },
    },
  };
}

export function mkResult(dialogId: string, queryId: string, over: Partial<QueryResult> = {}): QueryResult {
  return {
    query: `query ${dialogId}/${queryId}`,
    dialogId,
    queryId,
    followUpConfidence: "none",
    parentRef: null,
    attributeMap: {},
    taskMap: {},
    visList: [mkVis()],
    ambiguities: {},
    ...over,
  };
}

/** A dialog as the store serializes it: results in query order. */
export function mkDialog(dialogId: string, count: number): QueryResult[] {
  return Array.from({ length: count }, (_, i) => mkResult(dialogId, String(i)));
}

/**
 * The ambiguity shape the olympics query comes back with: one attribute
 * record (4 medal columns) and two value records (hockey, skating).
 */
export function olympicsShapedResult(): QueryResult {
  return mkResult("0", "0", {
    query: "Show medals in hockey and skating by country",
    visList: [],
    ambiguities: {
      attribute: {
        medals: {
          options: ["Total Medals", "Gold Medals", "Silver Medals", "Bronze Medals"],
          scores: [0.9, 0.909091, 0.892308, 0.892308],
          selected: null,
        },
      },
      value: {
        hockey: {
          options: [
            { attribute: "Sport", value: "Ice Hockey" },
            { attribute: "Sport", value: "Hockey" },
          ],
          scores: [0.92, 1.0],
          selected: null,
        },
        skating: {
          options: [
            { attribute: "Sport", value: "Figure Skating" },
            { attribute: "Sport", value: "Speed Skating" },
            { attribute: "Sport", value: "Short Speed Skating" },
          ],
          scores: [0.9, 0.907692, 0.873684],
          selected: null,
        },
      },
    },
  });
}

export function storeFixture(): DialogStoreJson {
  return {
    "0": mkDialog("0", 3),
    "1": mkDialog("1", 1),
    "0.1.0": mkDialog("0.1.0", 2),
    "0.1.1": mkDialog("0.1.1", 1),
    "0.1.0.0.0": mkDialog("0.1.0.0.0", 1),
  };
}
