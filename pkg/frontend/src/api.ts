/** Typed client for the litkg HTTP service. The UI never computes counts or
 * scores itself; everything rendered comes verbatim from these payloads. */

export type CoarseType = "Gene" | "Disease" | "Chemical" | "Organism";

export type FacetKind =
  | "EntityName"
  | "CoarseType"
  | "FineType"
  | "RelationSubtype"
  | "EventType"
  | "Action"
  | "PaperId";

export interface Constraint {
  facet: FacetKind;
  value: string;
}

export interface EntityModel {
  id: string;
  name: string;
  coarse_type: CoarseType;
  fine_types: string[];
  aliases: string[];
}

export interface EntitiesResponse {
  query: string;
  entities: EntityModel[];
}

export interface FacetEntry {
  term: string;
  count: number;
}

export interface FacetsResponse {
  kind: FacetKind;
  constraints: string[];
  entries: FacetEntry[];
}

export interface HeatmapCell {
  row: string;
  col: string;
  action: string;
  support: number;
}

export interface HeatmapResponse {
  row_type: CoarseType;
  col_type: CoarseType;
  rows: string[];
  cols: string[];
  cells: HeatmapCell[];
}

export interface PathModel {
  nodes: string[];
  edges: unknown[][];
  score: string;
  score_value: number;
}

export interface ProvenanceModel {
  paper_id: string;
  sentence_idx: number;
  char_span: [number, number] | null;
  text: string | null;
}

export interface SubgraphEdge {
  key: [string, string, string, string, string];
  salience: string;
  salience_value: number;
  support: number;
  evidence: ProvenanceModel[];
}

export interface SubgraphResponse {
  src: string;
  dst: string;
  truncated: boolean;
  nodes: EntityModel[];
  paths: PathModel[];
  edges: SubgraphEdge[];
}

export interface MentionModel {
  char_span: [number, number];
  entity_id: string;
  coarse_type: CoarseType;
  fine_types: string[];
}

export interface EvidenceHit {
  paper_id: string;
  sentence_idx: number;
  section: string;
  text: string;
  similarity: number;
  mentions: MentionModel[];
}

export interface EvidenceResponse {
  query: string;
  hits: EvidenceHit[];
}

export interface ErrorEnvelope {
  error: { code: string; message: string; detail?: unknown };
}

export class ApiError extends Error {
  constructor(
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

export function constraintParam(c: Constraint): string {
  return `${c.facet}:${c.value}`;
}

async function getJson<T>(url: string): Promise<T> {
  const response = await fetch(url);
  const body = await response.json();
  if (!response.ok) {
    const envelope = body as ErrorEnvelope;
    throw new ApiError(envelope.error?.code ?? "HttpError", envelope.error?.message ?? url);
  }
  return body as T;
}

async function postJson<T>(url: string, payload: unknown): Promise<T> {
  const response = await fetch(url, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(payload),
  });
  const body = await response.json();
  if (!response.ok) {
    const envelope = body as ErrorEnvelope;
    throw new ApiError(envelope.error?.code ?? "HttpError", envelope.error?.message ?? url);
  }
  return body as T;
}

function constraintQuery(constraints: Constraint[]): string {
  return constraints.map((c) => `c=${encodeURIComponent(constraintParam(c))}`).join("&");
}

export class ApiClient {
  constructor(readonly base: string = "") {}

  searchEntities(query: string, limit = 8): Promise<EntitiesResponse> {
    return getJson(`${this.base}/entities?q=${encodeURIComponent(query)}&limit=${limit}`);
  }

  facets(kind: FacetKind, constraints: Constraint[], limit = 30): Promise<FacetsResponse> {
    const cs = constraintQuery(constraints);
    return getJson(`${this.base}/facets?kind=${kind}&limit=${limit}${cs ? "&" + cs : ""}`);
  }

  heatmap(row: CoarseType, col: CoarseType, constraints: Constraint[]): Promise<HeatmapResponse> {
    const cs = constraintQuery(constraints);
    return getJson(`${this.base}/heatmap?row=${row}&col=${col}${cs ? "&" + cs : ""}`);
  }

  subgraph(src: string, dst: string, hops: number, topK: number): Promise<SubgraphResponse> {
    return getJson(
      `${this.base}/subgraph?src=${encodeURIComponent(src)}&dst=${encodeURIComponent(dst)}` +
        `&hops=${hops}&top_k=${topK}`,
    );
  }

  evidence(query: string, topN = 10): Promise<EvidenceResponse> {
    return postJson(`${this.base}/evidence`, { query, top_n: topN });
  }
}
