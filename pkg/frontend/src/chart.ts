/**
 * Chart rendering: hand the grammar spec to the embedded Vega-Lite runtime.
 *
 * The page loads the vega / vega-lite / vega-embed bundles with plain script
 * tags, so the runtime lives on window. We deliberately pass a deep copy of
 * the spec: the runtime normalizes in place, and the result object must stay
 * verbatim as the server produced it.
 */

import type { GrammarSpec, VisEntry } from "./types.js";

type EmbedFn = (el: HTMLElement, spec: GrammarSpec, opts?: Record<string, unknown>) => Promise<unknown>;

declare global {
  interface Window {
    vegaEmbed?: EmbedFn;
  }
}

export function cloneSpec(spec: GrammarSpec): GrammarSpec {
  return JSON.parse(JSON.stringify(spec)) as GrammarSpec;
}

/** Render a spec into el. Resolves false when the runtime is unavailable. */
export async function embedChart(el: HTMLElement, spec: GrammarSpec): Promise<boolean> {
  const embed = typeof window !== "undefined" ? window.vegaEmbed : undefined;
  if (!embed) {
    el.textContent = "[chart runtime not loaded]";
    return false;
  }
  await embed(el, cloneSpec(spec), { actions: false, renderer: "svg" });
  return true;
}

/** Short badge text for a recommendation, e.g. "bar: Genre, Budget". */
export function chartSummary(vis: VisEntry): string {
  const fields = vis.attributes.join(", ");
  return fields ? `${vis.markType}: ${fields}` : vis.markType;
}
