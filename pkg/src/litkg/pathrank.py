"""Simple-path enumeration, support-based scoring, and subgraph extraction.

Paths between two entities are ranked by how much of the literature backs
them: every edge carries a support count (distinct papers), and a path's
score aggregates its edge supports under one of three modes. Edge salience
in the extracted subgraph is the sum of the scores of the ranked paths that
pass through the edge.

All functions here are pure over a graph snapshot; scores use exact
rational arithmetic so ranking and salience sums are reproducible
bit-for-bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional

from .errors import InvalidQuery, NoPathFound, UnknownEntity
from .kg_store import EdgeKey, KnowledgeGraph, ProvenanceRef

DEFAULT_PATH_BUDGET = 100_000
MAX_HOPS_LIMIT = 4
EVIDENCE_PER_EDGE = 3


class ScoringMode(str, Enum):
    SUM = "SumSupport"
    AVG = "AvgSupport"
    MIN = "MinSupport"


@dataclass(frozen=True)
class PathQuery:
    src: str
    dst: str
    max_hops: int = 3
    top_k: int = 20
    mode: ScoringMode = ScoringMode.AVG
    directed: bool = False
    min_edge_support: int = 1
    categories: Optional[frozenset[str]] = None
    budget: int = DEFAULT_PATH_BUDGET

    def validate(self) -> None:
        if self.src == self.dst:
            raise InvalidQuery("src and dst must differ")
        if not 1 <= self.max_hops <= MAX_HOPS_LIMIT:
            raise InvalidQuery(f"max_hops must be in 1..{MAX_HOPS_LIMIT}")
        if self.top_k < 1:
            raise InvalidQuery("top_k must be >= 1")
        if self.budget < 1:
            raise InvalidQuery("budget must be >= 1")


@dataclass
class Path:
    nodes: tuple[str, ...]
    edges: tuple[EdgeKey, ...]
    score: Optional[Fraction] = None

    def __len__(self) -> int:
        return len(self.edges)

    def identity(self) -> tuple:
        return (self.nodes, self.edges)


@dataclass
class PathEnumeration:
    paths: list[Path]
    truncated: bool = False


def _edge_passes(graph: KnowledgeGraph, key: EdgeKey, q: PathQuery) -> bool:
    if q.categories is not None and key[2] not in q.categories:
        return False
    if q.min_edge_support > 1 and graph.support(key) < q.min_edge_support:
        return False
    return True


def enumerate_paths(graph: KnowledgeGraph, q: PathQuery) -> PathEnumeration:
    """All simple paths src->dst with at most max_hops edges.

    Exhaustive within the hop bound; stops early (with truncated=True) once
    the configured budget of emitted paths is reached.
    """
    q.validate()
    for eid in (q.src, q.dst):
        if not graph.has_entity(eid):
            raise UnknownEntity(f"unknown entity {eid!r}")

    paths: list[Path] = []
    truncated = False

    def walk(current: str, visited: set[str], nodes: list[str], edges: list[EdgeKey]) -> bool:
        nonlocal truncated
        if len(edges) >= q.max_hops:
            return True
        for key in sorted(graph.incident(current)):
            src, dst = key[0], key[1]
            if q.directed:
                if src != current:
                    continue
                nxt = dst
            else:
                nxt = dst if src == current else src
            if nxt in visited:
                continue
            if not _edge_passes(graph, key, q):
                continue
            nodes.append(nxt)
            edges.append(key)
            within_budget = True
            if nxt == q.dst:
                if len(paths) >= q.budget:
                    truncated = True
                    within_budget = False
                else:
                    paths.append(Path(nodes=tuple(nodes), edges=tuple(edges)))
            else:
                visited.add(nxt)
                within_budget = walk(nxt, visited, nodes, edges)
                visited.discard(nxt)
            nodes.pop()
            edges.pop()
            if not within_budget:
                return False
        return True

    walk(q.src, {q.src}, [q.src], [])
    return PathEnumeration(paths=paths, truncated=truncated)


def score_path(graph: KnowledgeGraph, path: Path, mode: ScoringMode) -> Fraction:
    supports = [Fraction(graph.support(key)) for key in path.edges]
    if not supports:
        return Fraction(0)
    if mode == ScoringMode.SUM:
        return sum(supports, Fraction(0))
    if mode == ScoringMode.MIN:
        return min(supports)
    return sum(supports, Fraction(0)) / len(supports)


def rank_paths(paths: list[Path], top_k: int) -> list[Path]:
    """Descending score; ties by shorter length, then node sequence, then edges."""
    ranked = sorted(
        paths,
        key=lambda p: (-(p.score if p.score is not None else Fraction(0)), len(p.nodes), p.nodes, p.edges),
    )
    return ranked[:top_k]


@dataclass
class ScoredSubgraph:
    src: str
    dst: str
    paths: list[Path]
    edge_salience: dict[EdgeKey, Fraction]
    node_ids: list[str]
    evidence: dict[EdgeKey, list[ProvenanceRef]]
    truncated: bool = False


def connection_subgraph(graph: KnowledgeGraph, q: PathQuery) -> ScoredSubgraph:
    enumeration = enumerate_paths(graph, q)
    if not enumeration.paths:
        raise NoPathFound(
            f"no path from {q.src!r} to {q.dst!r} within {q.max_hops} hops"
        )
    for path in enumeration.paths:
        path.score = score_path(graph, path, q.mode)
    ranked = rank_paths(enumeration.paths, q.top_k)

    salience: dict[EdgeKey, Fraction] = {}
    for path in ranked:
        for key in path.edges:
            salience[key] = salience.get(key, Fraction(0)) + path.score

    nodes = sorted({node for path in ranked for node in path.nodes})
    evidence = {
        key: sorted(graph.edge(key).provenance, key=lambda r: r.sort_key())[:EVIDENCE_PER_EDGE]
        for key in salience
    }
    return ScoredSubgraph(
        src=q.src,
        dst=q.dst,
        paths=ranked,
        edge_salience=salience,
        node_ids=nodes,
        evidence=evidence,
        truncated=enumeration.truncated,
    )
