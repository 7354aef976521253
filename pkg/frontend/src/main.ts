/** Dashboard wiring: search boxes, constraint chips, linked panels.
 *
 * Constraint state and the selected entity pair live in the URL query
 * string, so any view is shareable; popstate re-applies the URL.
 */

import { ApiClient, FacetKind, SubgraphEdge } from "./api.js";
import { ExplorerStore, FACET_PANELS } from "./state.js";
import { renderEdgeEvidence, renderEvidence } from "./render/evidence.js";
import { renderHeatmap } from "./render/heatmap.js";
import { renderSubgraph } from "./render/subgraph.js";
import { renderTagCloud } from "./render/tagcloud.js";

const FACET_TITLES: Record<string, string> = {
  EntityName: "Entities",
  EventType: "Event types",
  RelationSubtype: "Relation subtypes",
};

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text) node.textContent = text;
  return node;
}

export function mountApp(root: HTMLElement, api: ApiClient = new ApiClient()): ExplorerStore {
  const store = new ExplorerStore(api);
  store.applyQueryString(window.location.search);

  root.textContent = "";
  const header = el("header");
  header.appendChild(el("h1", undefined, "litkg explorer"));
  const chips = el("div", "chips");
  header.appendChild(chips);
  root.appendChild(header);

  const search = el("div", "search-bar");
  const srcInput = el("input");
  srcInput.placeholder = "source entity id (e.g. MESH:D008784)";
  srcInput.value = store.state.src ?? "";
  const dstInput = el("input");
  dstInput.placeholder = "target entity id";
  dstInput.value = store.state.dst ?? "";
  const connect = el("button", undefined, "connect");
  connect.addEventListener("click", () => {
    void store.selectEntities(srcInput.value.trim() || null, dstInput.value.trim() || null);
  });
  const evidenceInput = el("input");
  evidenceInput.placeholder = "free-text evidence query";
  const ask = el("button", undefined, "find evidence");
  const askIfReady = () => {
    const query = evidenceInput.value.trim();
    if (query) void store.queryEvidence(query);
  };
  ask.addEventListener("click", askIfReady);
  evidenceInput.addEventListener("keydown", (e) => {
    if (e.key === "Enter") askIfReady();
  });
  search.append(srcInput, dstInput, connect, evidenceInput, ask);
  root.appendChild(search);

  const grid = el("div", "grid");
  const panels: Record<string, HTMLElement> = {};
  for (const kind of FACET_PANELS) {
    const card = el("section", "card");
    card.appendChild(el("h2", undefined, FACET_TITLES[kind] ?? kind));
    const body = el("div", "panel");
    body.id = `facet-${kind}`;
    card.appendChild(body);
    grid.appendChild(card);
    panels[kind] = body;
  }
  const heatmapCard = el("section", "card card-wide");
  heatmapCard.appendChild(el("h2", undefined, "Regulator-disease heatmap"));
  const heatmapBody = el("div", "panel");
  heatmapBody.id = "heatmap";
  heatmapCard.appendChild(heatmapBody);
  grid.appendChild(heatmapCard);

  const subgraphCard = el("section", "card card-wide");
  subgraphCard.appendChild(el("h2", undefined, "Connection subgraph"));
  const subgraphBody = el("div", "panel");
  subgraphBody.id = "subgraph";
  subgraphCard.appendChild(subgraphBody);
  grid.appendChild(subgraphCard);

  const evidenceCard = el("section", "card card-wide");
  evidenceCard.appendChild(el("h2", undefined, "Evidence"));
  const evidenceBody = el("div", "panel");
  evidenceBody.id = "evidence";
  evidenceCard.appendChild(evidenceBody);
  grid.appendChild(evidenceCard);
  root.appendChild(grid);

  const onEdgeClick = (edge: SubgraphEdge) => renderEdgeEvidence(evidenceBody, edge.evidence);

  store.subscribe((state) => {
    chips.textContent = "";
    for (const constraint of state.constraints) {
      const chip = el("button", "chip", `${constraint.facet}: ${constraint.value} ×`);
      chip.addEventListener("click", () => {
        void store.toggleConstraint(constraint.facet, constraint.value);
      });
      chips.appendChild(chip);
    }
    const active = new Set(state.constraints.map((c) => c.value));
    for (const kind of FACET_PANELS) {
      renderTagCloud(panels[kind]!, kind, state.facetPanels[kind]!, active, {
        onToggle: (facet: FacetKind, value: string) => void store.toggleConstraint(facet, value),
        onRetry: () => void store.retry(kind),
      });
    }
    renderHeatmap(heatmapBody, state.heatmap, () => void store.retry("heatmap"));
    renderSubgraph(subgraphBody, state.subgraph, {
      onEdgeClick,
      onRetry: () => void store.retry("subgraph"),
    });
    renderEvidence(evidenceBody, state.evidence, () => void store.retry("evidence"));
    const query = store.toQueryString();
    const url = query ? `?${query}` : window.location.pathname;
    window.history.replaceState(null, "", url);
  });

  window.addEventListener("popstate", () => {
    store.applyQueryString(window.location.search);
    void store.refreshAll();
  });

  void store.refreshAll();
  return store;
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  mountApp(document.getElementById("app")!);
}
