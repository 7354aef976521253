"""Canonical line-delimited graph dumps and graph-description text export.

The canonical dump is the byte-stable serialization used for golden tests
and update-inverse checks: one JSON object per line, fixed field order,
entities sorted by id, edges by edge key, events by event key, provenance
by (paper_id, sentence_idx). Entities appear when they back at least one
edge, event role, or corpus mention; orphan shells are retained in memory
but stay out of the dump.
"""

from __future__ import annotations

import json
from typing import Optional

from .corpus import Corpus
from .errors import SchemaError, UnknownFormat
from .kg_store import (
    AssertionEdge,
    EntityRecord,
    EventAssertion,
    KnowledgeGraph,
    ProvenanceRef,
)
from .pathrank import ScoredSubgraph

HEADER = {"kind": "header", "schema": "litkg/1"}

NODE_COLORS = {"Chemical": "red", "Gene": "grey", "Disease": "blue", "Organism": "green"}

EXPORT_FORMATS = ("canonical", "graph-description")


def _dumps(obj: dict) -> str:
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def _prov_list(provenance) -> list:
    refs = sorted(provenance, key=lambda r: r.sort_key())
    return [[r.paper_id, r.sentence_idx, list(r.char_span) if r.char_span else None] for r in refs]


def _entity_line(rec: EntityRecord) -> str:
    return _dumps(
        {
            "kind": "entity",
            "id": rec.id,
            "name": rec.name,
            "coarse_type": rec.coarse_type,
            "fine_types": sorted(rec.fine_types),
            "aliases": sorted(rec.aliases),
        }
    )


def _edge_line(edge: AssertionEdge) -> str:
    return _dumps(
        {
            "kind": "edge",
            "src": edge.src,
            "dst": edge.dst,
            "category": edge.category,
            "subtype": edge.subtype,
            "action": edge.action,
            "provenance": _prov_list(edge.provenance),
        }
    )


def _event_line(event: EventAssertion) -> str:
    return _dumps(
        {
            "kind": "event",
            "event_type": event.event_type,
            "trigger": event.trigger,
            "roles": {k: event.roles[k] for k in sorted(event.roles)},
            "provenance": _prov_list(event.provenance),
        }
    )


def canonical_dump(graph: KnowledgeGraph, corpus: Optional[Corpus] = None) -> str:
    lines = [_dumps(HEADER)]
    live = set(graph.live_entity_ids(corpus))
    for eid in sorted(live):
        lines.append(_entity_line(graph.entity(eid)))
    for edge in graph.edges():
        lines.append(_edge_line(edge))
    for event in graph.events():
        lines.append(_event_line(event))
    return "\n".join(lines) + "\n"


def canonical_load(graph: KnowledgeGraph, text: str) -> None:
    """Load a canonical dump into an (empty or compatible) graph."""
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"dump line {lineno}: {exc}") from exc
        kind = obj.get("kind")
        if kind == "header":
            continue
        if kind == "entity":
            entity_id = graph.upsert_entity(
                EntityRecord(
                    id=obj["id"],
                    name=obj["name"],
                    coarse_type=obj["coarse_type"],
                    fine_types=frozenset(obj.get("fine_types", [])),
                    aliases=frozenset(obj.get("aliases", [])),
                )
            )
            graph.pin_entity(entity_id)
        elif kind == "edge":
            graph.add_assertion(
                AssertionEdge(
                    src=obj["src"],
                    dst=obj["dst"],
                    category=obj["category"],
                    subtype=obj["subtype"],
                    action=obj["action"],
                    provenance=_prov_set(obj.get("provenance", [])),
                )
            )
        elif kind == "event":
            graph.add_event(
                EventAssertion(
                    event_type=obj["event_type"],
                    trigger=obj["trigger"],
                    roles=dict(obj["roles"]),
                    provenance=_prov_set(obj.get("provenance", [])),
                )
            )
        else:
            raise SchemaError(f"dump line {lineno}: unknown record kind {kind!r}")


def _prov_set(items: list) -> set[ProvenanceRef]:
    refs = set()
    for item in items:
        paper_id, sentence_idx, span = item
        refs.add(
            ProvenanceRef(
                paper_id=paper_id,
                sentence_idx=sentence_idx,
                char_span=tuple(span) if span else None,
            )
        )
    return refs


# --- graph-description text (for external renderers) ---------------------------


def _node_stmt(rec: EntityRecord) -> str:
    color = NODE_COLORS[rec.coarse_type]
    return f'  "{rec.id}" [label="{rec.name}" type={rec.coarse_type} color={color}];'


def graph_description(
    graph: KnowledgeGraph,
    corpus: Optional[Corpus] = None,
    salience: Optional[dict] = None,
    node_ids: Optional[list[str]] = None,
    edge_keys: Optional[list] = None,
) -> str:
    lines = ["graph {"]
    ids = sorted(node_ids) if node_ids is not None else sorted(graph.live_entity_ids(corpus))
    for eid in ids:
        lines.append(_node_stmt(graph.entity(eid)))
    keys = sorted(edge_keys) if edge_keys is not None else [e.key for e in graph.edges()]
    for key in keys:
        edge = graph.edge(key)
        attrs = (
            f'category={edge.category} subtype="{edge.subtype}" '
            f"action={edge.action} support={graph.support(key)}"
        )
        if salience is not None and key in salience:
            attrs += f" salience={float(salience[key]):g}"
        lines.append(f'  "{edge.src}" -- "{edge.dst}" [{attrs}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_graph(
    graph: KnowledgeGraph,
    corpus: Optional[Corpus] = None,
    format: str = "canonical",
) -> bytes:
    if format == "canonical":
        return canonical_dump(graph, corpus).encode("utf-8")
    if format == "graph-description":
        return graph_description(graph, corpus).encode("utf-8")
    raise UnknownFormat(f"unknown export format {format!r}")


# --- subgraph exports -------------------------------------------------------


def _path_line(path) -> str:
    return _dumps(
        {
            "kind": "path",
            "nodes": list(path.nodes),
            "edges": [list(k) for k in path.edges],
            "score": str(path.score) if path.score is not None else None,
        }
    )


def subgraph_canonical(graph: KnowledgeGraph, sub: ScoredSubgraph) -> str:
    lines = [_dumps(HEADER)]
    for eid in sorted(sub.node_ids):
        lines.append(_entity_line(graph.entity(eid)))
    for key in sorted(sub.edge_salience):
        lines.append(_edge_line(graph.edge(key)))
    for path in sub.paths:
        lines.append(_path_line(path))
    return "\n".join(lines) + "\n"


def subgraph_description(graph: KnowledgeGraph, sub: ScoredSubgraph) -> str:
    return graph_description(
        graph,
        salience=sub.edge_salience,
        node_ids=list(sub.node_ids),
        edge_keys=list(sub.edge_salience),
    )


def export_subgraph(graph: KnowledgeGraph, sub: ScoredSubgraph, format: str = "canonical") -> bytes:
    if format == "canonical":
        return subgraph_canonical(graph, sub).encode("utf-8")
    if format == "graph-description":
        return subgraph_description(graph, sub).encode("utf-8")
    raise UnknownFormat(f"unknown export format {format!r}")
