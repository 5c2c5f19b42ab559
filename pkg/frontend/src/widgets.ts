/**
 * Ambiguity widget models.
 *
 * One widget per AmbiguityRecord on a query result: attribute-kind records
 * become single-select dropdowns, value-kind records become multi-select
 * button groups. The models are plain data so selection rules and the submit
 * gate can be tested without a DOM; chat.ts owns the rendering.
 */

import type { QueryResult, Resolutions, ValueOption } from "./types.js";

export interface WidgetChoice {
  /** Option label shown to the user (attribute name or cell value). */
  label: string;
  /** For value-kind records: the attribute the value belongs to. */
  attribute: string | null;
  score: number;
  selected: boolean;
}

export interface AmbiguityWidget {
  kind: "attribute" | "value";
  phrase: string;
  control: "dropdown" | "buttons";
  /** True when the record already carries a selection (auto-resolve ran). */
  resolved: boolean;
  choices: WidgetChoice[];
}

function valueLabel(option: string | ValueOption): string {
  return typeof option === "string" ? option : option.value;
}

function isPreselected(option: string | ValueOption, selected: (string | ValueOption)[] | null): boolean {
  if (selected === null) return false;
  const label = valueLabel(option);
  return selected.some((pick) => valueLabel(pick) === label);
}

/**
 * Widgets for every ambiguity record on the result, open or not.
 *
 * Resolved records (selected already filled, e.g. by server-side
 * auto-resolve) come back with their picks pre-highlighted and resolved=true
 * so the UI can render them read-only.
 */
export function buildWidgets(result: QueryResult): AmbiguityWidget[] {
  const widgets: AmbiguityWidget[] = [];
  for (const [phrase, entry] of Object.entries(result.ambiguities.attribute ?? {})) {
    widgets.push({
      kind: "attribute",
      phrase,
      control: "dropdown",
      resolved: entry.selected !== null,
      choices: entry.options.map((option, i) => ({
        label: option,
        attribute: null,
        score: entry.scores[i],
        selected: isPreselected(option, entry.selected),
      })),
    });
  }
  for (const [phrase, entry] of Object.entries(result.ambiguities.value ?? {})) {
    widgets.push({
      kind: "value",
      phrase,
      control: "buttons",
      resolved: entry.selected !== null,
      choices: entry.options.map((option, i) => ({
        label: option.value,
        attribute: option.attribute,
        score: entry.scores[i],
        selected: isPreselected(option, entry.selected),
      })),
    });
  }
  return widgets;
}

/**
 * Apply a user click. Attribute widgets are exclusive (picking one clears the
 * rest); value widgets toggle, since a phrase may legitimately mean several
 * cell values at once. Resolved widgets ignore input.
 */
export function toggleChoice(widget: AmbiguityWidget, index: number): boolean {
  if (widget.resolved || index < 0 || index >= widget.choices.length) return false;
  const choice = widget.choices[index];
  if (widget.kind === "attribute") {
    for (const other of widget.choices) other.selected = false;
    choice.selected = true;
  } else {
    choice.selected = !choice.selected;
  }
  return true;
}

export function widgetHasSelection(widget: AmbiguityWidget): boolean {
  return widget.choices.some((choice) => choice.selected);
}

/** The submit gate: every record needs a selection before resolving. */
export function allWidgetsComplete(widgets: AmbiguityWidget[]): boolean {
  return widgets.every((widget) => widget.resolved || widgetHasSelection(widget));
}

/** Selections of the still-open widgets, in the POST /resolve body shape. */
export function buildResolutions(widgets: AmbiguityWidget[]): Resolutions {
  const resolutions: Resolutions = {};
  for (const widget of widgets) {
    if (widget.resolved) continue;
    const picked = widget.choices.filter((choice) => choice.selected).map((choice) => choice.label);
    if (picked.length === 0) continue;
    if (widget.kind === "attribute") {
      (resolutions.attribute ??= {})[widget.phrase] = picked[0];
    } else {
      (resolutions.value ??= {})[widget.phrase] = picked;
    }
  }
  return resolutions;
}
