/**
 * Chat pane: message bubbles, ambiguity widgets, and the composer.
 *
 * The view is deliberately dumb. It renders what the API returned, collects
 * clicks, and hands intent back to the app through callbacks; it never
 * computes analytic state of its own. One request may be in flight at a time,
 * enforced here by disabling the send controls.
 */

import { ApiError } from "./api.js";
import type { QueryResult } from "./types.js";
import {
  AmbiguityWidget,
  allWidgetsComplete,
  buildWidgets,
  toggleChoice,
  widgetHasSelection,
} from "./widgets.js";

export type SendMode = "auto" | "standalone" | "follow-up";

export interface FocusNode {
  dialogId: string;
  queryId: string;
  query: string;
}

export interface ChatCallbacks {
  onSend(query: string, mode: SendMode): void;
  onResolve(target: { dialogId: string; queryId: string }, widgets: AmbiguityWidget[]): void;
  onFocusNode(dialogId: string, queryId: string): void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

const MODE_LABELS: Record<SendMode, string> = {
  auto: "auto detect",
  standalone: "standalone",
  "follow-up": "follow up on selected",
};

export class ChatView {
  readonly root: HTMLElement;
  private readonly log: HTMLElement;
  private readonly input: HTMLInputElement;
  private readonly sendButton: HTMLButtonElement;
  private readonly modeSelect: HTMLSelectElement;
  private readonly focusChip: HTMLElement;
  private readonly callbacks: ChatCallbacks;
  private busy = false;

  constructor(container: HTMLElement, callbacks: ChatCallbacks) {
    this.callbacks = callbacks;
    this.root = container;
    this.root.classList.add("chat");

    this.log = el("div", "chat__log");

    const composer = el("form", "chat__composer");
    this.focusChip = el("div", "chat__focus-chip");
    this.focusChip.hidden = true;

    this.input = el("input", "chat__input");
    this.input.type = "text";
    this.input.placeholder = "Ask about the data...";

    this.modeSelect = el("select", "chat__mode");
    for (const mode of Object.keys(MODE_LABELS) as SendMode[]) {
      const option = el("option", undefined, MODE_LABELS[mode]);
      option.value = mode;
      this.modeSelect.appendChild(option);
    }
    this.modeSelect.value = "auto";

    this.sendButton = el("button", "chat__send", "Send");
    this.sendButton.type = "submit";

    composer.append(this.focusChip, this.input, this.modeSelect, this.sendButton);
    composer.addEventListener("submit", (event) => {
      event.preventDefault();
      this.submit();
    });

    this.root.append(this.log, composer);
  }

  get mode(): SendMode {
    return this.modeSelect.value as SendMode;
  }

  set mode(mode: SendMode) {
    this.modeSelect.value = mode;
  }

  focusInput(): void {
    this.input.focus();
  }

  /** Single in-flight request: the composer locks while one is pending. */
  setBusy(busy: boolean): void {
    this.busy = busy;
    this.sendButton.disabled = busy;
    this.input.disabled = busy;
    this.root.classList.toggle("chat--busy", busy);
  }

  setFocusNode(node: FocusNode | null): void {
    if (node === null) {
      this.focusChip.hidden = true;
      this.focusChip.textContent = "";
      return;
    }
    this.focusChip.hidden = false;
    this.focusChip.textContent = `on [${node.dialogId}/${node.queryId}] "${node.query}"`;
  }

  private submit(): void {
    const query = this.input.value.trim();
    if (this.busy || query === "") return;
    this.input.value = "";
    this.callbacks.onSend(query, this.mode);
  }

  // ── bubbles ────────────────────────────────────────────────────────

  addUserMessage(query: string): void {
    const bubble = el("div", "chat__bubble chat__bubble--user", query);
    this.append(bubble);
  }

  addInfo(text: string): void {
    this.append(el("div", "chat__bubble chat__bubble--info", text));
  }

  /** 409/422 style failures surface inline instead of breaking the flow. */
  addError(error: unknown): void {
    const bubble = el("div", "chat__bubble chat__bubble--error");
    if (error instanceof ApiError) {
      bubble.appendChild(el("span", "chat__error-code", error.code));
      bubble.appendChild(el("span", undefined, ` ${error.message}`));
    } else {
      bubble.textContent = error instanceof Error ? error.message : String(error);
    }
    this.append(bubble);
  }

  /**
   * Render a query result: id tag, confidence badge, chart slot, and one
   * widget per ambiguity record. Returns the chart slot so the app can embed
   * the spec (or leave a placeholder while ambiguities are open).
   */
  addResult(result: QueryResult): HTMLElement {
    const bubble = el("div", "chat__bubble chat__bubble--bot");
    bubble.dataset.dialog = result.dialogId;
    bubble.dataset.query = result.queryId;

    const header = el("div", "chat__result-header");
    header.appendChild(el("span", "chat__node-id", `${result.dialogId}/${result.queryId}`));
    const badge = el(
      "span",
      `chat__badge chat__badge--${result.followUpConfidence}`,
      result.parentRef === null ? "standalone" : `follow-up: ${result.followUpConfidence}`,
    );
    header.appendChild(badge);
    if (result.parentRef !== null) {
      header.appendChild(
        el("span", "chat__parent", `from ${result.parentRef.dialogId}/${result.parentRef.queryId}`),
      );
    }
    header.addEventListener("click", () => this.callbacks.onFocusNode(result.dialogId, result.queryId));
    bubble.appendChild(header);

    const widgets = buildWidgets(result);
    if (widgets.length > 0) {
      bubble.appendChild(this.renderWidgets(result, widgets));
    }

    const chart = el("div", "chat__chart");
    if (result.visList.length === 0) {
      chart.classList.add("chat__chart--pending");
      chart.textContent = widgets.length > 0 ? "Resolve the highlighted terms to see the chart." : "";
    }
    bubble.appendChild(chart);
    this.append(bubble);
    return chart;
  }

  // ── ambiguity widgets ──────────────────────────────────────────────

  private renderWidgets(result: QueryResult, widgets: AmbiguityWidget[]): HTMLElement {
    const form = el("form", "ambiguity");
    const open = widgets.filter((w) => !w.resolved);
    form.appendChild(
      el(
        "div",
        "ambiguity__title",
        open.length > 0 ? "Which did you mean?" : "Interpreted as:",
      ),
    );

    const submit = el("button", "ambiguity__submit", "Apply");
    submit.type = "submit";
    const gate = () => {
      submit.disabled = !allWidgetsComplete(widgets);
    };

    for (const widget of widgets) {
      form.appendChild(
        widget.control === "dropdown"
          ? this.renderDropdown(widget, gate)
          : this.renderButtons(widget, gate),
      );
    }

    if (open.length > 0) {
      form.appendChild(submit);
      gate();
      form.addEventListener("submit", (event) => {
        event.preventDefault();
        if (!allWidgetsComplete(widgets)) return;
        this.callbacks.onResolve({ dialogId: result.dialogId, queryId: result.queryId }, widgets);
      });
    }
    return form;
  }

  private renderDropdown(widget: AmbiguityWidget, gate: () => void): HTMLElement {
    const row = el("label", "ambiguity__row");
    row.appendChild(el("span", "ambiguity__phrase", `"${widget.phrase}"`));
    const select = el("select", "ambiguity__select");
    select.disabled = widget.resolved;
    if (!widgetHasSelection(widget)) {
      const placeholder = el("option", undefined, "choose an attribute...");
      placeholder.value = "";
      placeholder.disabled = true;
      placeholder.selected = true;
      select.appendChild(placeholder);
    }
    widget.choices.forEach((choice, index) => {
      const option = el("option", undefined, `${choice.label} (${choice.score.toFixed(2)})`);
      option.value = String(index);
      option.selected = choice.selected;
      select.appendChild(option);
    });
    select.addEventListener("change", () => {
      toggleChoice(widget, Number(select.value));
      gate();
    });
    row.appendChild(select);
    return row;
  }

  private renderButtons(widget: AmbiguityWidget, gate: () => void): HTMLElement {
    const row = el("div", "ambiguity__row");
    row.appendChild(el("span", "ambiguity__phrase", `"${widget.phrase}"`));
    const group = el("div", "ambiguity__buttons");
    widget.choices.forEach((choice, index) => {
      const button = el("button", "ambiguity__choice", choice.label);
      button.type = "button";
      button.disabled = widget.resolved;
      button.title = choice.attribute ? `${choice.attribute} (${choice.score.toFixed(2)})` : "";
      button.classList.toggle("ambiguity__choice--on", choice.selected);
      button.addEventListener("click", () => {
        toggleChoice(widget, index);
        for (const [i, sibling] of Array.from(group.children).entries()) {
          sibling.classList.toggle("ambiguity__choice--on", widget.choices[i].selected);
        }
        gate();
      });
      group.appendChild(button);
    });
    row.appendChild(group);
    return row;
  }

  private append(bubble: HTMLElement): void {
    this.log.appendChild(bubble);
    this.log.scrollTop = this.log.scrollHeight;
  }
}
