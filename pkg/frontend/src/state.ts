/** Session state for the linked-view dashboard.
 *
 * Every user action that changes the constraint set or the selected entity
 * pair bumps a monotone generation counter and re-queries all panels with
 * that generation. A response only commits if its generation still matches
 * the store's; anything older is discarded, so panels can never mix epochs
 * no matter how responses interleave. Failures commit an error (with the
 * same generation rule) and surface as a per-panel retry affordance.
 */

import {
  ApiClient,
  ApiError,
  Constraint,
  CoarseType,
  EvidenceResponse,
  FacetKind,
  FacetsResponse,
  HeatmapResponse,
  SubgraphResponse,
  constraintParam,
} from "./api.js";

export const FACET_PANELS: FacetKind[] = ["EntityName", "EventType", "RelationSubtype"];

export interface PanelState<T> {
  generation: number;
  data: T | null;
  error: string | null;
  errorCode: string | null;
  loading: boolean;
}

function emptyPanel<T>(): PanelState<T> {
  return { generation: 0, data: null, error: null, errorCode: null, loading: false };
}

export interface SessionState {
  constraints: Constraint[];
  src: string | null;
  dst: string | null;
  hops: number;
  topK: number;
  generation: number;
  facetPanels: Record<string, PanelState<FacetsResponse>>;
  heatmap: PanelState<HeatmapResponse>;
  subgraph: PanelState<SubgraphResponse>;
  evidence: PanelState<EvidenceResponse>;
  evidenceQuery: string | null;
}

export type Listener = (state: SessionState) => void;

export class ExplorerStore {
  readonly state: SessionState;
  private listeners: Listener[] = [];
  private heatmapAxes: [CoarseType, CoarseType] = ["Gene", "Disease"];

  constructor(private api: ApiClient) {
    const facetPanels: Record<string, PanelState<FacetsResponse>> = {};
    for (const kind of FACET_PANELS) {
      facetPanels[kind] = emptyPanel();
    }
    this.state = {
      constraints: [],
      src: null,
      dst: null,
      hops: 3,
      topK: 20,
      generation: 0,
      facetPanels,
      heatmap: emptyPanel(),
      subgraph: emptyPanel(),
      evidence: emptyPanel(),
      evidenceQuery: null,
    };
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private notify(): void {
    for (const listener of this.listeners) {
      listener(this.state);
    }
  }

  hasConstraint(facet: FacetKind, value: string): boolean {
    return this.state.constraints.some((c) => c.facet === facet && c.value === value);
  }

  /** Add the constraint if absent, remove it if present; refresh every panel. */
  toggleConstraint(facet: FacetKind, value: string): Promise<void> {
    if (this.hasConstraint(facet, value)) {
      this.state.constraints = this.state.constraints.filter(
        (c) => !(c.facet === facet && c.value === value),
      );
    } else {
      this.state.constraints = [...this.state.constraints, { facet, value }];
    }
    return this.refreshAll();
  }

  selectEntities(src: string | null, dst: string | null): Promise<void> {
    this.state.src = src;
    this.state.dst = dst;
    return this.refreshAll();
  }

  queryEvidence(query: string): Promise<void> {
    this.state.evidenceQuery = query;
    const generation = this.bump();
    return this.loadPanel(this.state.evidence, generation, () =>
      this.api.evidence(query),
    ).then(() => undefined);
  }

  /** Re-run an individual failed panel at the current generation. */
  retry(panel: "heatmap" | "subgraph" | "evidence" | FacetKind): Promise<void> {
    const generation = this.state.generation;
    if (panel === "heatmap") {
      return this.loadPanel(this.state.heatmap, generation, () =>
        this.api.heatmap(this.heatmapAxes[0], this.heatmapAxes[1], this.state.constraints),
      );
    }
    if (panel === "subgraph") {
      return this.loadSubgraph(generation);
    }
    if (panel === "evidence") {
      const query = this.state.evidenceQuery;
      if (query === null) return Promise.resolve();
      return this.loadPanel(this.state.evidence, generation, () => this.api.evidence(query));
    }
    const facetPanel = this.state.facetPanels[panel];
    if (!facetPanel) return Promise.resolve();
    return this.loadPanel(facetPanel, generation, () =>
      this.api.facets(panel, this.state.constraints),
    );
  }

  private bump(): number {
    this.state.generation += 1;
    return this.state.generation;
  }

  /** Fetch every panel for one new generation; stale responses are dropped. */
  refreshAll(): Promise<void> {
    const generation = this.bump();
    const jobs: Promise<void>[] = [];
    for (const kind of FACET_PANELS) {
      const panel = this.state.facetPanels[kind]!;
      jobs.push(
        this.loadPanel(panel, generation, () => this.api.facets(kind, this.state.constraints)),
      );
    }
    jobs.push(
      this.loadPanel(this.state.heatmap, generation, () =>
        this.api.heatmap(this.heatmapAxes[0], this.heatmapAxes[1], this.state.constraints),
      ),
    );
    jobs.push(this.loadSubgraph(generation));
    this.notify();
    return Promise.all(jobs).then(() => undefined);
  }

  private loadSubgraph(generation: number): Promise<void> {
    const { src, dst, hops, topK } = this.state;
    if (!src || !dst) {
      this.state.subgraph = { generation, data: null, error: null, errorCode: null, loading: false };
      this.notify();
      return Promise.resolve();
    }
    return this.loadPanel(this.state.subgraph, generation, () =>
      this.api.subgraph(src, dst, hops, topK),
    );
  }

  private async loadPanel<T>(
    panel: PanelState<T>,
    generation: number,
    fetcher: () => Promise<T>,
  ): Promise<void> {
    panel.loading = true;
    try {
      const data = await fetcher();
      if (generation !== this.state.generation) {
        return; // a newer epoch owns the panels now
      }
      panel.data = data;
      panel.error = null;
      panel.errorCode = null;
      panel.generation = generation;
    } catch (err) {
      if (generation !== this.state.generation) {
        return;
      }
      panel.data = null;
      panel.error = err instanceof Error ? err.message : String(err);
      panel.errorCode = err instanceof ApiError ? err.code : null;
      panel.generation = generation;
    } finally {
      if (generation === this.state.generation) {
        panel.loading = false;
        this.notify();
      }
    }
  }

  // --- shareable URL state -------------------------------------------------

  toQueryString(): string {
    const params = new URLSearchParams();
    for (const c of this.state.constraints) {
      params.append("c", constraintParam(c));
    }
    if (this.state.src) params.set("src", this.state.src);
    if (this.state.dst) params.set("dst", this.state.dst);
    return params.toString();
  }

  applyQueryString(query: string): void {
    const params = new URLSearchParams(query);
    const constraints: Constraint[] = [];
    for (const raw of params.getAll("c")) {
      const sep = raw.indexOf(":");
      if (sep > 0) {
        constraints.push({
          facet: raw.slice(0, sep) as FacetKind,
          value: raw.slice(sep + 1),
        });
      }
    }
    this.state.constraints = constraints;
    this.state.src = params.get("src");
    this.state.dst = params.get("dst");
  }
}
