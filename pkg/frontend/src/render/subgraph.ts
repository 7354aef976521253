/** Connection subgraph view: SVG circle layout, nodes colored by type,
 * edge stroke width strictly monotone in server-reported salience. */

import type { SubgraphEdge, SubgraphResponse } from "../api.js";
import { TYPE_COLORS } from "../colors.js";
import type { PanelState } from "../state.js";
import { renderRetry } from "./tagcloud.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const SIZE = 420;
const RADIUS = 160;

export function strokeWidthFor(salience: number, maxSalience: number): number {
  if (maxSalience <= 0) return 1;
  return 1 + 5 * (salience / maxSalience);
}

export interface SubgraphHandlers {
  onEdgeClick: (edge: SubgraphEdge) => void;
  onRetry: () => void;
}

export function renderSubgraph(
  container: HTMLElement,
  panel: PanelState<SubgraphResponse>,
  handlers: SubgraphHandlers,
): void {
  container.textContent = "";
  container.dataset.generation = String(panel.generation);
  if (panel.error) {
    if (panel.errorCode === "NoPathFound") {
      renderNoPath(container, "no connecting path within the hop limit");
    } else {
      renderRetry(container, panel.error, handlers.onRetry);
    }
    return;
  }
  const data = panel.data;
  if (!data) {
    const empty = document.createElement("p");
    empty.className = "empty-state";
    empty.textContent = "pick two entities to see how they connect";
    container.appendChild(empty);
    return;
  }
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${SIZE} ${SIZE}`);
  svg.setAttribute("class", "subgraph");

  const positions = new Map<string, [number, number]>();
  data.nodes.forEach((node, i) => {
    const angle = (2 * Math.PI * i) / data.nodes.length - Math.PI / 2;
    positions.set(node.id, [
      SIZE / 2 + RADIUS * Math.cos(angle),
      SIZE / 2 + RADIUS * Math.sin(angle),
    ]);
  });

  const maxSalience = Math.max(...data.edges.map((e) => e.salience_value), 0);
  for (const edge of data.edges) {
    const [sx, sy] = positions.get(edge.key[0]) ?? [SIZE / 2, SIZE / 2];
    const [tx, ty] = positions.get(edge.key[1]) ?? [SIZE / 2, SIZE / 2];
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", String(sx));
    line.setAttribute("y1", String(sy));
    line.setAttribute("x2", String(tx));
    line.setAttribute("y2", String(ty));
    line.setAttribute("stroke", "#667");
    line.setAttribute("stroke-width", strokeWidthFor(edge.salience_value, maxSalience).toFixed(3));
    line.setAttribute("class", "edge");
    line.dataset.subtype = edge.key[3];
    line.dataset.salience = edge.salience;
    line.addEventListener("click", () => handlers.onEdgeClick(edge));
    const title = document.createElementNS(SVG_NS, "title");
    title.textContent = `${edge.key[3]} (${edge.key[4]}) support=${edge.support}`;
    line.appendChild(title);
    svg.appendChild(line);
  }

  for (const node of data.nodes) {
    const [x, y] = positions.get(node.id)!;
    const group = document.createElementNS(SVG_NS, "g");
    const circle = document.createElementNS(SVG_NS, "circle");
    circle.setAttribute("cx", String(x));
    circle.setAttribute("cy", String(y));
    circle.setAttribute("r", node.id === data.src || node.id === data.dst ? "14" : "10");
    circle.setAttribute("fill", TYPE_COLORS[node.coarse_type]);
    circle.setAttribute("class", "node");
    circle.dataset.entityId = node.id;
    circle.dataset.coarseType = node.coarse_type;
    const label = document.createElementNS(SVG_NS, "text");
    label.setAttribute("x", String(x));
    label.setAttribute("y", String(y - 16));
    label.setAttribute("text-anchor", "middle");
    label.setAttribute("class", "node-label");
    label.textContent = node.name;
    group.appendChild(circle);
    group.appendChild(label);
    svg.appendChild(group);
  }
  container.appendChild(svg);

  if (data.truncated) {
    const note = document.createElement("p");
    note.className = "truncation-note";
    note.textContent = "path enumeration hit its budget; results truncated";
    container.appendChild(note);
  }
}

export function renderNoPath(container: HTMLElement, message: string): void {
  container.textContent = "";
  const empty = document.createElement("p");
  empty.className = "empty-state";
  empty.textContent = message;
  container.appendChild(empty);
}
