/**
 * Payload shapes for the convoviz REST API.
 *
 * These mirror the JSON the Python service emits byte-for-byte; the UI never
 * invents fields of its own on top of them. Anything analytic (attribute maps,
 * task maps, chart specs) is owned by the server -- the browser only displays
 * what it is handed.
 */

export type Confidence = "high" | "low" | "none";

export type DataType = "quantitative" | "nominal" | "ordinal" | "temporal";

export interface AttributeMeta {
  name: string;
  dataType: DataType;
  domain: (string | number)[];
  aliases: string[];
}

export interface SessionInfo {
  sessionId: string;
  datasetId: string;
  rowCount: number;
  attributes: AttributeMeta[];
  config?: Record<string, unknown>;
}

export interface ParentRef {
  dialogId: string;
  queryId: string;
}

/** One attributeMap entry. Extra keys may appear; we keep them opaque. */
export interface AttributeEntry {
  queryPhrase: string[];
  matchKind: string;
  score: number;
  isAmbiguous: boolean;
  impliedValues: string[];
  grouping: boolean;
  [key: string]: unknown;
}

export interface TaskEntry {
  attributes: string[];
  operator: string | null;
  values: (string | number)[];
  [key: string]: unknown;
}

/** A Vega-Lite compatible chart spec. Treated as an opaque document. */
export type GrammarSpec = Record<string, unknown>;

export interface VisEntry {
  score: number;
  markType: string;
  attributes: string[];
  tasks: string[];
  grammarSpec: GrammarSpec;
}

/** Candidate for a value-kind ambiguity: which attribute the value lives in. */
export interface ValueOption {
  attribute: string;
  value: string;
}

export interface AmbiguityEntry<Opt = string | ValueOption> {
  options: Opt[];
  scores: number[];
  /** null while the ambiguity is still open. */
  selected: Opt[] | null;
}

export interface AmbiguityGroups {
  attribute?: Record<string, AmbiguityEntry<string>>;
  value?: Record<string, AmbiguityEntry<ValueOption>>;
}

export interface QueryResult {
  query: string;
  dialogId: string;
  queryId: string;
  followUpConfidence: Confidence;
  parentRef: ParentRef | null;
  attributeMap: Record<string, AttributeEntry>;
  taskMap: Record<string, TaskEntry[]>;
  visList: VisEntry[];
  ambiguities: AmbiguityGroups;
}

/** GET /sessions/{id}/conversations returns the dialog store verbatim. */
export type DialogStoreJson = Record<string, QueryResult[]>;

/** POST /sessions/{id}/resolve request body. */
export interface Resolutions {
  attribute?: Record<string, string>;
  value?: Record<string, string[]>;
}

export interface AnalyzeRequest {
  query: string;
  dialog?: boolean | "auto" | null;
  dialogId?: string;
  queryId?: string;
}

/** Error envelope every non-2xx response carries. */
export interface ErrorBody {
  error: { code: string; message: string };
}
