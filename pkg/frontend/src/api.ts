/**
 * Thin typed client for the convoviz REST service.
 *
 * Every method maps to exactly one endpoint. Failures are normalized into
 * ApiError carrying the HTTP status and the machine-readable error code from
 * the response envelope, so callers can branch on `code` instead of parsing
 * message text.
 */

import type {
  AnalyzeRequest,
  DialogStoreJson,
  ErrorBody,
  QueryResult,
  Resolutions,
  SessionInfo,
} from "./types.js";

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;

  constructor(status: number, code: string, message: string) {
    super(message);
    this.name = "ApiError";
    this.status = status;
    this.code = code;
  }
}

export interface CreateSessionOptions {
  /** Name of a bundled sample dataset, e.g. "olympics". */
  datasetId?: string;
  /** Inline CSV text for ad-hoc tables. */
  csv?: string;
  /** Dataset name when uploading inline CSV. */
  name?: string;
  config?: Record<string, unknown>;
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ConvovizClient {
  baseUrl: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl: string, fetchImpl?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    // bind so the default works both in browsers and in node tests
    this.fetchImpl = fetchImpl ?? ((input, init) => fetch(input, init));
  }

  async samples(): Promise<string[]> {
    const body = await this.request<{ samples: string[] }>("GET", "/samples");
    return body.samples;
  }

  createSession(options: CreateSessionOptions): Promise<SessionInfo> {
    return this.request("POST", "/sessions", options);
  }

  /** Multipart upload variant for files picked in the browser. */
  async uploadSession(file: File | Blob, config?: Record<string, unknown>): Promise<SessionInfo> {
    const form = new FormData();
    form.append("file", file);
    if (config) form.append("config", JSON.stringify(config));
    const response = await this.fetchImpl(`${this.baseUrl}/sessions`, {
      method: "POST",
      body: form,
    });
    return this.unwrap(response);
  }

  session(sessionId: string): Promise<SessionInfo> {
    return this.request("GET", `/sessions/${encodeURIComponent(sessionId)}`);
  }

  analyze(sessionId: string, request: AnalyzeRequest): Promise<QueryResult> {
    return this.request("POST", `/sessions/${encodeURIComponent(sessionId)}/analyze`, request);
  }

  resolve(
    sessionId: string,
    resolutions: Resolutions,
    target?: { dialogId: string; queryId: string },
  ): Promise<QueryResult> {
    return this.request("POST", `/sessions/${encodeURIComponent(sessionId)}/resolve`, {
      resolutions,
      ...(target ?? {}),
    });
  }

  conversations(sessionId: string): Promise<DialogStoreJson> {
    return this.request("GET", `/sessions/${encodeURIComponent(sessionId)}/conversations`);
  }

  async deleteDialog(sessionId: string, dialogId: string, queryId?: string): Promise<void> {
    const suffix = queryId === undefined ? "" : `?queryId=${encodeURIComponent(queryId)}`;
    const path = `/sessions/${encodeURIComponent(sessionId)}/dialogs/${encodeURIComponent(dialogId)}${suffix}`;
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, { method: "DELETE" });
    if (!response.ok) throw await this.toError(response);
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    return this.unwrap(response);
  }

  private async unwrap<T>(response: Response): Promise<T> {
    if (!response.ok) throw await this.toError(response);
    return (await response.json()) as T;
  }

  private async toError(response: Response): Promise<ApiError> {
    let code = "http_error";
    let message = `request failed with status ${response.status}`;
    try {
      const body = (await response.json()) as ErrorBody;
      if (body && body.error) {
        code = body.error.code ?? code;
        message = body.error.message ?? message;
      }
    } catch {
      // non-JSON body (proxy error page, empty 500); keep the generic message
    }
    return new ApiError(response.status, code, message);
  }
}
