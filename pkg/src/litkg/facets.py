"""Faceted counting and action heatmaps over graph assertions.

A constraint set is a conjunction of (facet, value) filters applied to the
pool of assertions (relation edges plus event assertions). Facet counts are
distinct-assertion counts, so adding a constraint can never raise a count;
this anti-monotonicity is what keeps linked dashboard panels consistent.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Optional

from .errors import UnknownFacet
from .kg_store import ACTION_SYMBOLS, COARSE_TYPES, KnowledgeGraph

FACET_KINDS = (
    "EntityName",
    "CoarseType",
    "FineType",
    "RelationSubtype",
    "EventType",
    "Action",
    "PaperId",
)


@dataclass(frozen=True)
class Constraint:
    facet: str
    value: str


def parse_constraint(raw: str) -> Constraint:
    """Wire form ``<facet>:<value>``; the value may itself contain colons."""
    facet, sep, value = raw.partition(":")
    if not sep or facet not in FACET_KINDS or not value:
        raise UnknownFacet(f"bad constraint {raw!r}; expected <facet>:<value>")
    return Constraint(facet=facet, value=value)


def dedupe_constraints(constraints: list[Constraint]) -> list[Constraint]:
    seen = []
    for c in constraints:
        if c not in seen:
            seen.append(c)
    return seen


@dataclass(frozen=True)
class _AssertionView:
    kind: str  # "edge" | "event"
    entity_ids: tuple[str, ...]
    subtype: Optional[str]  # relation subtype (non-event edges)
    event_type: Optional[str]  # event name (events and Event-category edges)
    action: Optional[str]
    papers: frozenset[str]


def _views(graph: KnowledgeGraph) -> Iterator[_AssertionView]:
    for edge in graph.edges():
        is_event_edge = edge.category == "Event"
        yield _AssertionView(
            kind="edge",
            entity_ids=(edge.src, edge.dst),
            subtype=None if is_event_edge else edge.subtype,
            event_type=edge.subtype if is_event_edge else None,
            action=edge.action,
            papers=frozenset(r.paper_id for r in edge.provenance),
        )
    for event in graph.events():
        yield _AssertionView(
            kind="event",
            entity_ids=tuple(v for _, v in sorted(event.roles.items())),
            subtype=None,
            event_type=event.event_type,
            action=None,
            papers=frozenset(r.paper_id for r in event.provenance),
        )


def _satisfies(graph: KnowledgeGraph, view: _AssertionView, c: Constraint) -> bool:
    if c.facet == "EntityName":
        for eid in view.entity_ids:
            rec = graph.entity(eid)
            if c.value == rec.id or c.value == rec.name or c.value in rec.aliases:
                return True
        return False
    if c.facet == "CoarseType":
        return any(graph.entity(eid).coarse_type == c.value for eid in view.entity_ids)
    if c.facet == "FineType":
        return any(c.value in graph.entity(eid).fine_types for eid in view.entity_ids)
    if c.facet == "RelationSubtype":
        return view.subtype == c.value
    if c.facet == "EventType":
        return view.event_type == c.value
    if c.facet == "Action":
        return view.action == c.value
    if c.facet == "PaperId":
        return c.value in view.papers
    raise UnknownFacet(f"unknown facet {c.facet!r}")


def _terms(graph: KnowledgeGraph, view: _AssertionView, kind: str) -> set[str]:
    if kind == "EntityName":
        return {graph.entity(eid).name for eid in view.entity_ids}
    if kind == "CoarseType":
        return {graph.entity(eid).coarse_type for eid in view.entity_ids}
    if kind == "FineType":
        out: set[str] = set()
        for eid in view.entity_ids:
            out |= graph.entity(eid).fine_types
        return out
    if kind == "RelationSubtype":
        return {view.subtype} if view.subtype else set()
    if kind == "EventType":
        return {view.event_type} if view.event_type else set()
    if kind == "Action":
        return {view.action} if view.action else set()
    if kind == "PaperId":
        return set(view.papers)
    raise UnknownFacet(f"unknown facet {kind!r}")


@dataclass(frozen=True)
class FacetCounts:
    kind: str
    entries: tuple[tuple[str, int], ...]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "entries": [{"term": t, "count": c} for t, c in self.entries],
        }


def facet_counts(
    graph: KnowledgeGraph,
    constraints: list[Constraint],
    kind: str,
    limit: Optional[int] = None,
) -> FacetCounts:
    if kind not in FACET_KINDS:
        raise UnknownFacet(f"unknown facet {kind!r}")
    constraints = dedupe_constraints(constraints)
    counter: Counter = Counter()
    for view in _views(graph):
        if all(_satisfies(graph, view, c) for c in constraints):
            for term in _terms(graph, view, kind):
                counter[term] += 1
    entries = sorted(counter.items(), key=lambda kv: (-kv[1], kv[0]))
    if limit is not None:
        entries = entries[:limit]
    return FacetCounts(kind=kind, entries=tuple(entries))


@dataclass(frozen=True)
class HeatmapCell:
    row: str
    col: str
    action_symbol: str
    support: int


@dataclass(frozen=True)
class HeatmapMatrix:
    row_type: str
    col_type: str
    rows: tuple[str, ...]
    cols: tuple[str, ...]
    cells: tuple[HeatmapCell, ...]

    def to_dict(self) -> dict:
        return {
            "row_type": self.row_type,
            "col_type": self.col_type,
            "rows": list(self.rows),
            "cols": list(self.cols),
            "cells": [
                {"row": c.row, "col": c.col, "action": c.action_symbol, "support": c.support}
                for c in self.cells
            ],
        }


def heatmap(
    graph: KnowledgeGraph,
    constraints: list[Constraint],
    row_type: str,
    col_type: str,
) -> HeatmapMatrix:
    """Direct-edge heatmap between two coarse types, one action symbol per cell."""
    for t in (row_type, col_type):
        if t not in COARSE_TYPES:
            raise UnknownFacet(f"heatmap axis must be a coarse type, got {t!r}")
    constraints = dedupe_constraints(constraints)
    # (row name, col name) -> action -> distinct paper ids
    cells: dict[tuple[str, str], dict[str, set[str]]] = {}
    for edge in graph.edges():
        view = _AssertionView(
            kind="edge",
            entity_ids=(edge.src, edge.dst),
            subtype=None if edge.category == "Event" else edge.subtype,
            event_type=edge.subtype if edge.category == "Event" else None,
            action=edge.action,
            papers=frozenset(r.paper_id for r in edge.provenance),
        )
        if not all(_satisfies(graph, view, c) for c in constraints):
            continue
        a, b = graph.entity(edge.src), graph.entity(edge.dst)
        oriented = []
        if a.coarse_type == row_type and b.coarse_type == col_type:
            oriented.append((a.name, b.name))
        if b.coarse_type == row_type and a.coarse_type == col_type and a.id != b.id:
            oriented.append((b.name, a.name))
        for key in oriented:
            by_action = cells.setdefault(key, {})
            by_action.setdefault(edge.action, set()).update(view.papers)

    out_cells = []
    for (row, col), by_action in sorted(cells.items()):
        support = len(set().union(*by_action.values()))
        best = sorted(by_action.items(), key=lambda kv: (-len(kv[1]), kv[0]))
        if len(best) > 1 and len(best[0][1]) == len(best[1][1]):
            action = "Affect"  # tied actions fall back to the neutral symbol
        else:
            action = best[0][0]
        out_cells.append(
            HeatmapCell(row=row, col=col, action_symbol=ACTION_SYMBOLS[action], support=support)
        )
    rows = tuple(sorted({c.row for c in out_cells}))
    cols = tuple(sorted({c.col for c in out_cells}))
    return HeatmapMatrix(
        row_type=row_type, col_type=col_type, rows=rows, cols=cols, cells=tuple(out_cells)
    )
