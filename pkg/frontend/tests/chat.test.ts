// @vitest-environment happy-dom
import { beforeEach, describe, expect, it, vi } from "vitest";

import { ApiError } from "../src/api.js";
import { ChatCallbacks, ChatView } from "../src/chat.js";
import { mkResult, olympicsShapedResult } from "./helpers.js";

let view: ChatView;
let callbacks: { [K in keyof ChatCallbacks]: ReturnType<typeof vi.fn> };
let container: HTMLElement;

beforeEach(() => {
  document.body.innerHTML = "";
  container = document.createElement("div");
  document.body.appendChild(container);
  callbacks = { onSend: vi.fn(), onResolve: vi.fn(), onFocusNode: vi.fn() };
  view = new ChatView(container, callbacks);
});

function send(text: string): void {
  const input = container.querySelector<HTMLInputElement>(".chat__input")!;
  input.value = text;
  container.querySelector("form.chat__composer")!.dispatchEvent(new Event("submit", { cancelable: true }));
}

describe("composer", () => {
  it("defaults to auto mode and submits trimmed queries", () => {
    send("  show price by home type  ");
    expect(callbacks.onSend).toHaveBeenCalledWith("show price by home type", "auto");
  });

  it("swallows empty submissions", () => {
    send("   ");
    expect(callbacks.onSend).not.toHaveBeenCalled();
  });

  it("offers the three calling conventions as modes", () => {
    const options = Array.from(container.querySelectorAll<HTMLOptionElement>(".chat__mode option"));
    expect(options.map((o) => o.value)).toEqual(["auto", "standalone", "follow-up"]);
    view.mode = "standalone";
    send("show price");
    expect(callbacks.onSend).toHaveBeenCalledWith("show price", "standalone");
  });

  it("locks to a single in-flight request", () => {
    view.setBusy(true);
    expect(container.querySelector<HTMLButtonElement>(".chat__send")!.disabled).toBe(true);
    send("queued while busy");
    expect(callbacks.onSend).not.toHaveBeenCalled();

    view.setBusy(false);
    expect(container.querySelector<HTMLButtonElement>(".chat__send")!.disabled).toBe(false);
    send("after release");
    expect(callbacks.onSend).toHaveBeenCalledTimes(1);
  });

  it("shows which node a follow-up would target", () => {
    const chip = container.querySelector<HTMLElement>(".chat__focus-chip")!;
    expect(chip.hidden).toBe(true);
    view.setFocusNode({ dialogId: "0", queryId: "1", query: "as a bar chart" });
    expect(chip.hidden).toBe(false);
    expect(chip.textContent).toContain("[0/1]");
    view.setFocusNode(null);
    expect(chip.hidden).toBe(true);
  });
});

describe("result bubbles", () => {
  it("labels standalone results and keeps the node id clickable", () => {
    view.addResult(mkResult("1", "0"));
    const bubble = container.querySelector<HTMLElement>(".chat__bubble--bot")!;
    expect(bubble.dataset.dialog).toBe("1");
    expect(bubble.querySelector(".chat__badge")!.textContent).toBe("standalone");
    bubble.querySelector<HTMLElement>(".chat__result-header")!.click();
    expect(callbacks.onFocusNode).toHaveBeenCalledWith("1", "0");
  });

  it("badges follow-ups with their confidence and parent", () => {
    view.addResult(
      mkResult("0", "2", {
        followUpConfidence: "high",
        parentRef: { dialogId: "0", queryId: "1" },
      }),
    );
    const badge = container.querySelector(".chat__badge")!;
    expect(badge.textContent).toBe("follow-up: high");
    expect(badge.classList.contains("chat__badge--high")).toBe(true);
    expect(container.querySelector(".chat__parent")!.textContent).toBe("from 0/1");
  });

  it("returns a live chart slot for unambiguous results", () => {
    const slot = view.addResult(mkResult("0", "0"));
    expect(slot.isConnected).toBe(true);
    expect(slot.classList.contains("chat__chart--pending")).toBe(false);
    expect(container.querySelector("form.ambiguity")).toBeNull();
  });

  it("parks the chart slot while ambiguities are open", () => {
    const slot = view.addResult(olympicsShapedResult());
    expect(slot.classList.contains("chat__chart--pending")).toBe(true);
    expect(slot.textContent).toContain("Resolve");
  });

  it("renders API failures as error bubbles with the machine code", () => {
    view.addError(new ApiError(409, "unresolved_ambiguities", "resolve the parent first"));
    const bubble = container.querySelector(".chat__bubble--error")!;
    expect(bubble.querySelector(".chat__error-code")!.textContent).toBe("unresolved_ambiguities");
    expect(bubble.textContent).toContain("resolve the parent first");
  });
});

describe("ambiguity widgets", () => {
  it("renders a dropdown and two button groups for the olympics query", () => {
    view.addResult(olympicsShapedResult());
    expect(container.querySelectorAll(".ambiguity__row")).toHaveLength(3);
    expect(container.querySelectorAll("select.ambiguity__select")).toHaveLength(1);
    const groups = container.querySelectorAll(".ambiguity__buttons");
    expect(groups).toHaveLength(2);
    expect(groups[0].querySelectorAll("button")).toHaveLength(2);
    expect(groups[1].querySelectorAll("button")).toHaveLength(3);
  });

  it("keeps Apply disabled until every record has a pick, then resolves", () => {
    view.addResult(olympicsShapedResult());
    const submit = container.querySelector<HTMLButtonElement>(".ambiguity__submit")!;
    expect(submit.disabled).toBe(true);

    const select = container.querySelector<HTMLSelectElement>(".ambiguity__select")!;
    select.value = "0";
    select.dispatchEvent(new Event("change"));
    expect(submit.disabled).toBe(true);

    const [hockey, skating] = Array.from(container.querySelectorAll(".ambiguity__buttons"));
    hockey.querySelectorAll("button")[1].click();
    expect(submit.disabled).toBe(true);
    skating.querySelectorAll("button")[0].click();
    expect(submit.disabled).toBe(false);

    submit.closest("form")!.dispatchEvent(new Event("submit", { cancelable: true }));
    expect(callbacks.onResolve).toHaveBeenCalledTimes(1);
    const [target, widgets] = callbacks.onResolve.mock.calls[0];
    expect(target).toEqual({ dialogId: "0", queryId: "0" });
    expect(widgets).toHaveLength(3);
  });

  it("reflects value toggles in the button styling", () => {
    view.addResult(olympicsShapedResult());
    const button = container.querySelectorAll(".ambiguity__buttons")[0].querySelectorAll("button")[0];
    button.click();
    expect(button.classList.contains("ambiguity__choice--on")).toBe(true);
    button.click();
    expect(button.classList.contains("ambiguity__choice--on")).toBe(false);
  });

  it("shows auto-resolved records read-only with their picks highlighted", () => {
    const result = olympicsShapedResult();
    result.ambiguities.attribute!.medals.selected = ["Total Medals"];
    result.ambiguities.value!.hockey.selected = [{ attribute: "Sport", value: "Hockey" }];
    result.ambiguities.value!.skating.selected = [{ attribute: "Sport", value: "Figure Skating" }];
    view.addResult(result);

    expect(container.querySelector(".ambiguity__title")!.textContent).toBe("Interpreted as:");
    expect(container.querySelector(".ambiguity__submit")).toBeNull();
    expect(container.querySelector<HTMLSelectElement>(".ambiguity__select")!.disabled).toBe(true);
    const on = container.querySelectorAll(".ambiguity__choice--on");
    expect(on).toHaveLength(2);
    expect(Array.from(on, (b) => b.textContent)).toEqual(["Hockey", "Figure Skating"]);
  });
});
