/**
 * App wiring: session setup, chat pane, and the mind map side by side.
 *
 * All conversation state lives on the server. After every mutating call the
 * app re-fetches /conversations and rebuilds the tree from scratch, so a page
 * reload reconstructs exactly what is on screen.
 */

import { ConvovizClient } from "./api.js";
import { embedChart } from "./chart.js";
import { ChatView, SendMode } from "./chat.js";
import { buildConversationTree, ConversationHub, findNode } from "./tree.js";
import { renderMindMap } from "./mindmap.js";
import type { AnalyzeRequest, QueryResult, SessionInfo } from "./types.js";
import { AmbiguityWidget, buildResolutions } from "./widgets.js";

const BASE_URL_KEY = "convoviz.baseUrl";
const DEFAULT_BASE_URL = "http://localhost:8140";

interface AppState {
  client: ConvovizClient;
  sessionId: string | null;
  hub: ConversationHub | null;
  selected: { dialogId: string; queryId: string } | null;
  zoom: number;
}

function byId<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function main(): void {
  const state: AppState = {
    client: new ConvovizClient(localStorage.getItem(BASE_URL_KEY) ?? DEFAULT_BASE_URL),
    sessionId: null,
    hub: null,
    selected: null,
    zoom: 1,
  };

  const baseUrlInput = byId<HTMLInputElement>("base-url");
  const sampleSelect = byId<HTMLSelectElement>("sample-select");
  const startButton = byId<HTMLButtonElement>("start-session");
  const uploadInput = byId<HTMLInputElement>("upload-csv");
  const sessionLabel = byId<HTMLElement>("session-label");
  const mapPane = byId<HTMLElement>("mindmap-pane");
  const mapZoomWrap = byId<HTMLElement>("mindmap-zoom");

  baseUrlInput.value = state.client.baseUrl;
  baseUrlInput.addEventListener("change", () => {
    const url = baseUrlInput.value.trim() || DEFAULT_BASE_URL;
    localStorage.setItem(BASE_URL_KEY, url);
    state.client = new ConvovizClient(url);
    void loadSamples();
  });

  const chat = new ChatView(byId("chat-pane"), {
    onSend: (query, mode) => void send(query, mode),
    onResolve: (target, widgets) => void resolve(target, widgets),
    onFocusNode: (dialogId, queryId) => focusNode(dialogId, queryId),
  });

  async function loadSamples(): Promise<void> {
    try {
      const names = await state.client.samples();
      sampleSelect.innerHTML = "";
      for (const name of names) {
        const option = document.createElement("option");
        option.value = name;
        option.textContent = name;
        sampleSelect.appendChild(option);
      }
    } catch (error) {
      chat.addError(error);
    }
  }

  function adoptSession(info: SessionInfo): void {
    state.sessionId = info.sessionId;
    state.selected = null;
    chat.setFocusNode(null);
    const attrs = info.attributes.map((a) => `${a.name} (${a.dataType})`).join(", ");
    sessionLabel.textContent = `${info.datasetId}: ${info.rowCount} rows`;
    sessionLabel.title = attrs;
    chat.addInfo(`Connected to ${info.datasetId} (${info.rowCount} rows). Attributes: ${attrs}`);
    void refreshTree();
  }

  startButton.addEventListener("click", () => {
    const datasetId = sampleSelect.value;
    if (!datasetId) return;
    state.client
      .createSession({ datasetId })
      .then(adoptSession)
      .catch((error) => chat.addError(error));
  });

  uploadInput.addEventListener("change", () => {
    const file = uploadInput.files?.[0];
    if (!file) return;
    state.client
      .uploadSession(file)
      .then(adoptSession)
      .catch((error) => chat.addError(error));
    uploadInput.value = "";
  });

  async function refreshTree(): Promise<void> {
    if (!state.sessionId) return;
    const store = await state.client.conversations(state.sessionId);
    state.hub = buildConversationTree(store);
    drawMap();
  }

  function drawMap(): void {
    if (!state.hub) return;
    mapZoomWrap.innerHTML = renderMindMap(state.hub, { selected: state.selected });
    mapZoomWrap.style.transform = `scale(${state.zoom})`;
  }

  function focusNode(dialogId: string, queryId: string): void {
    if (!state.hub) return;
    const node = findNode(state.hub, dialogId, queryId);
    if (!node) return;
    state.selected = { dialogId, queryId };
    chat.setFocusNode({ dialogId, queryId, query: node.query });
    drawMap();
    chat.focusInput();
  }

  function analyzeRequest(query: string, mode: SendMode): AnalyzeRequest {
    if (mode === "standalone") return { query };
    if (mode === "follow-up") {
      return state.selected
        ? { query, dialog: true, dialogId: state.selected.dialogId, queryId: state.selected.queryId }
        : { query, dialog: true };
    }
    return { query, dialog: "auto" };
  }

  async function send(query: string, mode: SendMode): Promise<void> {
    if (!state.sessionId) {
      chat.addInfo("Start a session first: pick a sample dataset or upload a CSV.");
      return;
    }
    chat.addUserMessage(query);
    chat.setBusy(true);
    try {
      const result = await state.client.analyze(state.sessionId, analyzeRequest(query, mode));
      await showResult(result);
    } catch (error) {
      chat.addError(error);
    } finally {
      chat.setBusy(false);
    }
  }

  async function resolve(
    target: { dialogId: string; queryId: string },
    widgets: AmbiguityWidget[],
  ): Promise<void> {
    if (!state.sessionId) return;
    chat.setBusy(true);
    try {
      const result = await state.client.resolve(state.sessionId, buildResolutions(widgets), target);
      await showResult(result);
    } catch (error) {
      chat.addError(error);
    } finally {
      chat.setBusy(false);
    }
  }

  async function showResult(result: QueryResult): Promise<void> {
    const chartSlot = chat.addResult(result);
    if (result.visList.length > 0) {
      // the spec goes to the renderer untouched: the server owns the encoding
      await embedChart(chartSlot, result.visList[0].grammarSpec);
    }
    state.selected = { dialogId: result.dialogId, queryId: result.queryId };
    chat.setFocusNode({ dialogId: result.dialogId, queryId: result.queryId, query: result.query });
    await refreshTree();
  }

  // mind map interactions: click to focus, plus icon to arm a follow-up
  mapPane.addEventListener("click", (event) => {
    const target = event.target as Element;
    const nodeEl = target.closest("[data-dialog]");
    if (!nodeEl) return;
    const dialogId = nodeEl.getAttribute("data-dialog")!;
    const queryId = nodeEl.getAttribute("data-query")!;
    focusNode(dialogId, queryId);
    if (target.closest(".mm-plus")) {
      chat.mode = "follow-up";
    }
  });

  mapPane.addEventListener(
    "wheel",
    (event) => {
      if (!event.ctrlKey) return;
      event.preventDefault();
      state.zoom = Math.min(3, Math.max(0.3, state.zoom * (event.deltaY < 0 ? 1.15 : 0.87)));
      mapZoomWrap.style.transform = `scale(${state.zoom})`;
    },
    { passive: false },
  );

  void loadSamples();
}

document.addEventListener("DOMContentLoaded", main);
