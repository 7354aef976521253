/** DOM rendering: type->color map, salience-monotone strokes, verbatim
 * server numbers, highlight offsets, retry affordances. */

// @vitest-environment jsdom

import { describe, expect, it, vi } from "vitest";

import type { EvidenceResponse, FacetsResponse, HeatmapResponse, SubgraphResponse } from "../src/api.js";
import { TYPE_COLORS } from "../src/colors.js";
import type { PanelState } from "../src/state.js";
import { highlightSpans, renderEdgeEvidence, renderEvidence } from "../src/render/evidence.js";
import { renderHeatmap } from "../src/render/heatmap.js";
import { renderSubgraph, strokeWidthFor } from "../src/render/subgraph.js";
import { renderTagCloud } from "../src/render/tagcloud.js";
import { SUBGRAPH_FIXTURE } from "./mock_server.js";

function panel<T>(data: T): PanelState<T> {
  return { generation: 1, data, error: null, errorCode: null, loading: false };
}

function errorPanel<T>(message: string, code: string | null = null): PanelState<T> {
  return { generation: 1, data: null, error: message, errorCode: code, loading: false };
}

describe("subgraph view", () => {
  it("colors every node by the type->color map", () => {
    const container = document.createElement("div");
    renderSubgraph(container, panel(SUBGRAPH_FIXTURE as unknown as SubgraphResponse), {
      onEdgeClick: () => {},
      onRetry: () => {},
    });
    const circles = [...container.querySelectorAll("circle")];
    expect(circles.length).toBe(SUBGRAPH_FIXTURE.nodes.length);
    for (const circle of circles) {
      const type = circle.getAttribute("data-coarse-type") as keyof typeof TYPE_COLORS;
      expect(circle.getAttribute("fill")).toBe(TYPE_COLORS[type]);
    }
    // fixture covers all four coarse types
    const seen = new Set(circles.map((c) => c.getAttribute("data-coarse-type")));
    expect(seen).toEqual(new Set(["Chemical", "Gene", "Disease", "Organism"]));
  });

  it("doubled salience gets a strictly thicker stroke", () => {
    const container = document.createElement("div");
    renderSubgraph(container, panel(SUBGRAPH_FIXTURE as unknown as SubgraphResponse), {
      onEdgeClick: () => {},
      onRetry: () => {},
    });
    const widths = [...container.querySelectorAll("line")].map((l) =>
      parseFloat(l.getAttribute("stroke-width")!),
    );
    expect(widths.length).toBe(2);
    expect(Math.max(...widths)).toBeGreaterThan(Math.min(...widths));
    expect(strokeWidthFor(4, 4)).toBeGreaterThan(strokeWidthFor(2, 4));
  });

  it("clicking an edge feeds its evidence to the handler in API order", () => {
    const container = document.createElement("div");
    const onEdgeClick = vi.fn();
    renderSubgraph(container, panel(SUBGRAPH_FIXTURE as unknown as SubgraphResponse), {
      onEdgeClick,
      onRetry: () => {},
    });
    const firstLine = container.querySelector("line")!;
    firstLine.dispatchEvent(new MouseEvent("click"));
    expect(onEdgeClick).toHaveBeenCalledTimes(1);
    const edge = onEdgeClick.mock.calls[0]![0];
    expect(edge.evidence.map((r: { paper_id: string }) => r.paper_id)).toEqual(["p-a", "p-b"]);
  });

  it("NoPathFound renders an empty state, not a retry button", () => {
    const container = document.createElement("div");
    renderSubgraph(container, errorPanel<SubgraphResponse>("disconnected", "NoPathFound"), {
      onEdgeClick: () => {},
      onRetry: () => {},
    });
    expect(container.querySelector(".empty-state")).not.toBeNull();
    expect(container.querySelector("button.retry")).toBeNull();
  });

  it("other errors render a retry affordance", () => {
    const container = document.createElement("div");
    const onRetry = vi.fn();
    renderSubgraph(container, errorPanel<SubgraphResponse>("boom"), {
      onEdgeClick: () => {},
      onRetry,
    });
    const button = container.querySelector("button.retry")!;
    button.dispatchEvent(new MouseEvent("click"));
    expect(onRetry).toHaveBeenCalled();
  });
});

describe("tag cloud", () => {
  it("renders server counts verbatim", () => {
    const data: FacetsResponse = {
      kind: "EntityName",
      constraints: [],
      entries: [
        { term: "Losartan", count: 7 },
        { term: "ACE2", count: 3 },
      ],
    };
    const container = document.createElement("div");
    renderTagCloud(container, "EntityName", panel(data), new Set(), {
      onToggle: () => {},
      onRetry: () => {},
    });
    const tags = [...container.querySelectorAll("button.tag")];
    expect(tags.map((t) => [t.textContent, t.getAttribute("data-count")])).toEqual([
      ["Losartan", "7"],
      ["ACE2", "3"],
    ]);
  });

  it("click toggles the clicked term", () => {
    const data: FacetsResponse = {
      kind: "EventType",
      constraints: [],
      entries: [{ term: "Binding", count: 2 }],
    };
    const container = document.createElement("div");
    const onToggle = vi.fn();
    renderTagCloud(container, "EventType", panel(data), new Set(), {
      onToggle,
      onRetry: () => {},
    });
    container.querySelector("button.tag")!.dispatchEvent(new MouseEvent("click"));
    expect(onToggle).toHaveBeenCalledWith("EventType", "Binding");
  });
});

describe("heatmap", () => {
  it("shows the action symbol and support from the payload", () => {
    const data: HeatmapResponse = {
      row_type: "Gene",
      col_type: "Disease",
      rows: ["TNF"],
      cols: ["obesity"],
      cells: [{ row: "TNF", col: "obesity", action: "--", support: 2 }],
    };
    const container = document.createElement("div");
    renderHeatmap(container, panel(data), () => {});
    const cell = container.querySelector("td.heat-cell")!;
    expect(cell.textContent).toBe("--");
    expect(cell.getAttribute("data-support")).toBe("2");
  });
});

describe("evidence", () => {
  it("highlights both mention spans at the right offsets", () => {
    const text = "Losartan decreases TNF expression";
    const fragment = highlightSpans(text, [
      { char_span: [0, 8], entity_id: "MESH:D008784", coarse_type: "Chemical", fine_types: [] },
      { char_span: [19, 22], entity_id: "GENE:7124", coarse_type: "Gene", fine_types: [] },
    ]);
    const host = document.createElement("p");
    host.appendChild(fragment);
    const marks = [...host.querySelectorAll("mark")];
    expect(marks.map((m) => m.textContent)).toEqual(["Losartan", "TNF"]);
    expect(host.textContent).toBe(text);
  });

  it("renders hits in API order with similarities", () => {
    const data: EvidenceResponse = {
      query: "q",
      hits: [
        { paper_id: "p2", sentence_idx: 1, section: "Body", text: "second", similarity: 0.9, mentions: [] },
        { paper_id: "p1", sentence_idx: 0, section: "Body", text: "first", similarity: 0.5, mentions: [] },
      ],
    };
    const container = document.createElement("div");
    renderEvidence(container, panel(data), () => {});
    const rows = [...container.querySelectorAll(".evidence-row")];
    expect(rows.map((r) => r.querySelector("p")!.textContent)).toEqual(["second", "first"]);
    expect(rows[0]!.querySelector(".evidence-source")!.textContent).toContain("p2:1");
  });

  it("edge evidence rows follow provenance order", () => {
    const container = document.createElement("div");
    renderEdgeEvidence(container, [
      { paper_id: "p-a", sentence_idx: 1, char_span: null, text: "one" },
      { paper_id: "p-b", sentence_idx: 3, char_span: null, text: "two" },
      { paper_id: "CTD", sentence_idx: 0, char_span: null, text: null },
    ]);
    const rows = [...container.querySelectorAll(".evidence-row")];
    expect(rows.length).toBe(3);
    expect(rows[2]!.textContent).toContain("curated source");
  });
});
