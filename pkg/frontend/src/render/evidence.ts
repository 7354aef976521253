/** Evidence panel: ranked sentences with highlighted mention spans, in the
 * exact order the server returned them. */

import type { EvidenceResponse, MentionModel, ProvenanceModel } from "../api.js";
import type { PanelState } from "../state.js";
import { renderRetry } from "./tagcloud.js";

export function highlightSpans(text: string, mentions: MentionModel[]): DocumentFragment {
  const fragment = document.createDocumentFragment();
  const ordered = [...mentions].sort((a, b) => a.char_span[0] - b.char_span[0]);
  let cursor = 0;
  for (const mention of ordered) {
    const [start, end] = mention.char_span;
    if (start > cursor) {
      fragment.appendChild(document.createTextNode(text.slice(cursor, start)));
    }
    const mark = document.createElement("mark");
    mark.className = `mention mention-${mention.coarse_type.toLowerCase()}`;
    mark.dataset.entityId = mention.entity_id;
    mark.textContent = text.slice(start, end);
    fragment.appendChild(mark);
    cursor = end;
  }
  if (cursor < text.length) {
    fragment.appendChild(document.createTextNode(text.slice(cursor)));
  }
  return fragment;
}

function sentenceRow(
  text: string,
  sourceLabel: string,
  mentions: MentionModel[],
  similarity: number | null,
): HTMLElement {
  const row = document.createElement("li");
  row.className = "evidence-row";
  const body = document.createElement("p");
  body.appendChild(highlightSpans(text, mentions));
  const source = document.createElement("span");
  source.className = "evidence-source";
  source.textContent = similarity === null ? sourceLabel : `${sourceLabel} · ${similarity.toFixed(4)}`;
  row.appendChild(body);
  row.appendChild(source);
  return row;
}

export function renderEvidence(
  container: HTMLElement,
  panel: PanelState<EvidenceResponse>,
  onRetry: () => void,
): void {
  container.textContent = "";
  container.dataset.generation = String(panel.generation);
  if (panel.error) {
    renderRetry(container, panel.error, onRetry);
    return;
  }
  if (!panel.data || panel.data.hits.length === 0) {
    const empty = document.createElement("p");
    empty.className = "empty-state";
    empty.textContent = "no evidence yet";
    container.appendChild(empty);
    return;
  }
  const list = document.createElement("ol");
  list.className = "evidence-list";
  for (const hit of panel.data.hits) {
    list.appendChild(
      sentenceRow(hit.text, `${hit.paper_id}:${hit.sentence_idx}`, hit.mentions, hit.similarity),
    );
  }
  container.appendChild(list);
}

/** Edge-click view: the provenance sentences behind one subgraph edge. */
export function renderEdgeEvidence(container: HTMLElement, refs: ProvenanceModel[]): void {
  container.textContent = "";
  const list = document.createElement("ol");
  list.className = "evidence-list";
  for (const ref of refs) {
    const label = `${ref.paper_id}:${ref.sentence_idx}`;
    list.appendChild(sentenceRow(ref.text ?? "(curated source; no sentence)", label, [], null));
  }
  container.appendChild(list);
}
