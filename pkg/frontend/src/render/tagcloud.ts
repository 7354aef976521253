/** Tag cloud panel: term size scales with the server-reported count. */

import type { FacetsResponse, FacetKind } from "../api.js";
import type { PanelState } from "../state.js";

export interface TagCloudHandlers {
  onToggle: (facet: FacetKind, value: string) => void;
  onRetry: () => void;
}

export function fontSizeFor(count: number, maxCount: number): number {
  if (maxCount <= 0) return 12;
  return 12 + Math.round(16 * (count / maxCount));
}

export function renderTagCloud(
  container: HTMLElement,
  kind: FacetKind,
  panel: PanelState<FacetsResponse>,
  active: Set<string>,
  handlers: TagCloudHandlers,
): void {
  container.textContent = "";
  container.dataset.generation = String(panel.generation);
  if (panel.error) {
    renderRetry(container, panel.error, handlers.onRetry);
    return;
  }
  if (!panel.data || panel.data.entries.length === 0) {
    const empty = document.createElement("p");
    empty.className = "empty-state";
    empty.textContent = "no matching assertions";
    container.appendChild(empty);
    return;
  }
  const maxCount = Math.max(...panel.data.entries.map((e) => e.count));
  for (const entry of panel.data.entries) {
    const tag = document.createElement("button");
    tag.className = "tag" + (active.has(entry.term) ? " tag-active" : "");
    tag.style.fontSize = `${fontSizeFor(entry.count, maxCount)}px`;
    tag.textContent = entry.term;
    tag.dataset.count = String(entry.count);
    tag.title = `${entry.count}`;
    tag.addEventListener("click", () => handlers.onToggle(kind, entry.term));
    container.appendChild(tag);
  }
}

export function renderRetry(container: HTMLElement, message: string, onRetry: () => void): void {
  const wrap = document.createElement("div");
  wrap.className = "panel-error";
  const text = document.createElement("span");
  text.textContent = message;
  const button = document.createElement("button");
  button.className = "retry";
  button.textContent = "retry";
  button.addEventListener("click", onRetry);
  wrap.appendChild(text);
  wrap.appendChild(button);
  container.appendChild(wrap);
}
