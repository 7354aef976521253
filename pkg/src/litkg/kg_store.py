"""Typed, provenance-tracked multigraph over biomedical entities.

Edges are identified by (src, dst, category, subtype, action); re-asserting
an existing edge merges provenance instead of duplicating it, so the support
of a knowledge element is always the number of distinct papers backing it.

Entity attributes are recorded per contributing source, which makes paper
removal an exact inverse of ingestion: dropping a paper recomputes every
touched entity as if that paper had never been seen. Entities that lose all
edges and mentions are flagged orphaned but retained, so their ids stay
valid query targets.
"""

from __future__ import annotations

import copy
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterator, Optional

from .errors import (
    EmptyProvenance,
    FrozenSnapshot,
    MalformedId,
    UnknownEdge,
    UnknownEntity,
    UnknownSubtype,
)
from .registry import Registries, default_registries

if TYPE_CHECKING:
    from .corpus import Corpus

COARSE_TYPES = ("Gene", "Disease", "Chemical", "Organism")
ACTIONS = ("Increase", "Decrease", "Affect")
CATEGORIES = (
    "GeneChemical",
    "ChemicalDisease",
    "GeneDisease",
    "ChemicalGO",
    "ChemicalPathway",
    "Event",
)
ACTION_SYMBOLS = {"Increase": "++", "Decrease": "--", "Affect": "→"}

_ID_RE = re.compile(
    r"^(?:MESH:[CD][0-9]{6,9}|GENE:[0-9]+|TAX:[0-9]+|LOCAL:[a-z0-9]+(?:-[a-z0-9]+)*)$"
)

EdgeKey = tuple  # (src, dst, category, subtype, action)
EventKey = tuple  # (event_type, trigger, ((role, entity_id), ...))


def validate_entity_id(entity_id: str) -> None:
    if not _ID_RE.match(entity_id or ""):
        raise MalformedId(f"id {entity_id!r} lacks a recognized scheme prefix")


@dataclass(frozen=True)
class ProvenanceRef:
    paper_id: str
    sentence_idx: int
    char_span: Optional[tuple[int, int]] = None

    def sort_key(self) -> tuple:
        return (self.paper_id, self.sentence_idx, self.char_span or (-1, -1))


@dataclass(frozen=True)
class EntityRecord:
    id: str
    name: str
    coarse_type: str
    fine_types: frozenset[str] = frozenset()
    aliases: frozenset[str] = frozenset()


@dataclass
class AssertionEdge:
    src: str
    dst: str
    category: str
    subtype: str
    action: str
    provenance: set[ProvenanceRef] = field(default_factory=set)

    @property
    def key(self) -> EdgeKey:
        return (self.src, self.dst, self.category, self.subtype, self.action)


@dataclass
class EventAssertion:
    event_type: str
    trigger: str
    roles: dict[str, str]
    provenance: set[ProvenanceRef] = field(default_factory=set)

    @property
    def key(self) -> EventKey:
        return (self.event_type, self.trigger, tuple(sorted(self.roles.items())))


@dataclass(frozen=True)
class GraphStats:
    diseases: int
    chemicals: int
    genes: int
    organisms: int
    chemical_gene: int
    chemical_disease: int
    gene_disease: int
    other_links: int
    papers: int

    def to_dict(self) -> dict:
        return {
            "diseases": self.diseases,
            "chemicals": self.chemicals,
            "genes": self.genes,
            "organisms": self.organisms,
            "links": {
                "chemical_gene": self.chemical_gene,
                "chemical_disease": self.chemical_disease,
                "gene_disease": self.gene_disease,
                "other": self.other_links,
            },
            "papers": self.papers,
        }


@dataclass(frozen=True)
class RemovalSummary:
    edges_deleted: int
    edges_weakened: int
    entities_orphaned: int
    events_deleted: int = 0
    events_weakened: int = 0
    orphaned_ids: tuple[str, ...] = ()


@dataclass(frozen=True)
class _Contribution:
    """One source's view of an entity; merged views are recomputed from these."""

    seq: int
    source: Optional[str]  # paper id, or None for direct upserts
    name: str
    coarse_type: str
    fine_types: frozenset[str]
    aliases: frozenset[str]


_LINK_BUCKETS = {
    "GeneChemical": "chemical_gene",
    "ChemicalDisease": "chemical_disease",
    "GeneDisease": "gene_disease",
}


class KnowledgeGraph:
    def __init__(self, registries: Optional[Registries] = None):
        self.registries = registries or default_registries()
        self._contribs: dict[str, list[_Contribution]] = {}
        self._shells: dict[str, EntityRecord] = {}  # last view of contribution-less entities
        self._merged: dict[str, EntityRecord] = {}
        self._edges: dict[EdgeKey, AssertionEdge] = {}
        self._events: dict[EventKey, EventAssertion] = {}
        self._adj: dict[str, set[EdgeKey]] = {}
        self._event_refs: dict[str, set[EventKey]] = {}
        self._orphans: set[str] = set()
        self._pinned: set[str] = set()  # entities materialized by a dump import
        self._seq = 0
        self._frozen = False

    # --- snapshot discipline -------------------------------------------------

    def snapshot(self) -> "KnowledgeGraph":
        """Deep, immutable copy; safe to share across reader threads."""
        clone = copy.deepcopy(self)
        clone._frozen = True
        return clone

    def _check_mutable(self) -> None:
        if self._frozen:
            raise FrozenSnapshot("snapshot graphs are read-only")

    # --- entities ----------------------------------------------------------

    def upsert_entity(
        self,
        entity: EntityRecord,
        source: Optional[str] = None,
    ) -> str:
        self._check_mutable()
        validate_entity_id(entity.id)
        if entity.coarse_type not in COARSE_TYPES:
            raise MalformedId(f"unknown coarse type {entity.coarse_type!r}")
        if "" in entity.fine_types:
            raise MalformedId("fine_types may not contain the empty string")
        if not entity.name:
            raise MalformedId("entity name must be non-empty")
        self._seq += 1
        contrib = _Contribution(
            seq=self._seq,
            source=source,
            name=entity.name,
            coarse_type=entity.coarse_type,
            fine_types=frozenset(entity.fine_types),
            aliases=frozenset(entity.aliases) | {entity.name},
        )
        self._contribs.setdefault(entity.id, []).append(contrib)
        self._shells.pop(entity.id, None)
        self._orphans.discard(entity.id)
        self._merged.pop(entity.id, None)
        return entity.id

    def has_entity(self, entity_id: str) -> bool:
        return entity_id in self._contribs or entity_id in self._shells

    def entity(self, entity_id: str) -> EntityRecord:
        rec = self._merge(entity_id)
        if rec is None:
            raise UnknownEntity(f"unknown entity {entity_id!r}")
        return rec

    def _merge(self, entity_id: str) -> Optional[EntityRecord]:
        cached = self._merged.get(entity_id)
        if cached is not None:
            return cached
        contribs = self._contribs.get(entity_id)
        if not contribs:
            return self._shells.get(entity_id)
        first = min(contribs, key=lambda c: c.seq)
        fine: set[str] = set()
        aliases: set[str] = set()
        for c in contribs:
            fine |= c.fine_types
            aliases |= c.aliases
        rec = EntityRecord(
            id=entity_id,
            name=first.name,
            coarse_type=first.coarse_type,
            fine_types=frozenset(fine),
            aliases=frozenset(aliases),
        )
        self._merged[entity_id] = rec
        return rec

    def entity_ids(self) -> list[str]:
        return sorted(set(self._contribs) | set(self._shells))

    def entity_count(self) -> int:
        return len(set(self._contribs) | set(self._shells))

    def entities(self) -> Iterator[EntityRecord]:
        for eid in self.entity_ids():
            yield self.entity(eid)

    def search_entities(self, query: str, limit: int = 20) -> list[EntityRecord]:
        """Case-insensitive substring match over id, name, and aliases."""
        q = query.strip().lower()
        hits = []
        for eid in self.entity_ids():
            rec = self.entity(eid)
            haystacks = [rec.id.lower(), rec.name.lower()] + [a.lower() for a in rec.aliases]
            if any(q in h for h in haystacks):
                hits.append(rec)
        hits.sort(key=lambda r: (r.name.lower(), r.id))
        return hits[:limit]

    # --- edges ---------------------------------------------------------------

    def add_assertion(self, edge: AssertionEdge) -> EdgeKey:
        self._check_mutable()
        if not self.has_entity(edge.src):
            raise UnknownEntity(f"unknown src entity {edge.src!r}")
        if not self.has_entity(edge.dst):
            raise UnknownEntity(f"unknown dst entity {edge.dst!r}")
        if edge.category not in CATEGORIES:
            raise UnknownSubtype(f"unknown category {edge.category!r}")
        registry = self.registries.events if edge.category == "Event" else self.registries.relations
        if edge.subtype not in registry:
            raise UnknownSubtype(f"subtype {edge.subtype!r} not in registry")
        if edge.action not in ACTIONS:
            raise UnknownSubtype(f"unknown action {edge.action!r}")
        if not edge.provenance:
            raise EmptyProvenance(f"assertion {edge.key} has no provenance")
        key = edge.key
        existing = self._edges.get(key)
        if existing is not None:
            existing.provenance |= set(edge.provenance)
        else:
            stored = AssertionEdge(*key, provenance=set(edge.provenance))
            self._edges[key] = stored
            self._adj.setdefault(edge.src, set()).add(key)
            self._adj.setdefault(edge.dst, set()).add(key)
        return key

    def has_edge(self, key: EdgeKey) -> bool:
        return tuple(key) in self._edges

    def edge(self, key: EdgeKey) -> AssertionEdge:
        e = self._edges.get(tuple(key))
        if e is None:
            raise UnknownEdge(f"unknown edge {tuple(key)!r}")
        return e

    def edges(self) -> Iterator[AssertionEdge]:
        for key in sorted(self._edges):
            yield self._edges[key]

    def edge_count(self) -> int:
        return len(self._edges)

    def support(self, key: EdgeKey) -> int:
        return len({r.paper_id for r in self.edge(key).provenance})

    def incident(self, entity_id: str) -> set[EdgeKey]:
        return set(self._adj.get(entity_id, ()))

    def neighbors(
        self,
        entity_id: str,
        category: Optional[str] = None,
        coarse_type: Optional[str] = None,
        min_support: Optional[int] = None,
    ) -> list[tuple[EdgeKey, str]]:
        if not self.has_entity(entity_id):
            raise UnknownEntity(f"unknown entity {entity_id!r}")
        out = []
        for key in self._adj.get(entity_id, ()):
            edge = self._edges[key]
            other = edge.dst if edge.src == entity_id else edge.src
            if category is not None and edge.category != category:
                continue
            if coarse_type is not None and self.entity(other).coarse_type != coarse_type:
                continue
            if min_support is not None and self.support(key) < min_support:
                continue
            out.append((key, other))
        out.sort(key=lambda pair: (-self.support(pair[0]), pair[0]))
        return out

    # --- events ------------------------------------------------------------

    def add_event(self, event: EventAssertion) -> EventKey:
        self._check_mutable()
        if event.event_type not in self.registries.events:
            raise UnknownSubtype(f"event type {event.event_type!r} not in registry")
        if not event.roles:
            raise EmptyProvenance(f"event {event.event_type!r} has no roles")
        for role, eid in event.roles.items():
            if not self.has_entity(eid):
                raise UnknownEntity(f"event role {role!r} names unknown entity {eid!r}")
        if not event.provenance:
            raise EmptyProvenance(f"event {event.key} has no provenance")
        key = event.key
        existing = self._events.get(key)
        if existing is not None:
            existing.provenance |= set(event.provenance)
        else:
            stored = EventAssertion(
                event_type=event.event_type,
                trigger=event.trigger,
                roles=dict(event.roles),
                provenance=set(event.provenance),
            )
            self._events[key] = stored
            for eid in event.roles.values():
                self._event_refs.setdefault(eid, set()).add(key)
        return key

    def has_event(self, key: EventKey) -> bool:
        return tuple(key) in self._events

    def event(self, key: EventKey) -> EventAssertion:
        ev = self._events.get(tuple(key))
        if ev is None:
            raise UnknownEdge(f"unknown event {tuple(key)!r}")
        return ev

    def events(self) -> Iterator[EventAssertion]:
        for key in sorted(self._events):
            yield self._events[key]

    def event_count(self) -> int:
        return len(self._events)

    def event_refs(self, entity_id: str) -> set[EventKey]:
        return set(self._event_refs.get(entity_id, ()))

    # --- liveness / stats ------------------------------------------------------

    def pin_entity(self, entity_id: str) -> None:
        """Keep an entity in exports even without edges or mentions."""
        self._check_mutable()
        self._pinned.add(entity_id)

    def is_live(self, entity_id: str, corpus: Optional["Corpus"] = None) -> bool:
        """Live entities back at least one edge, event role, or corpus mention."""
        if self._adj.get(entity_id):
            return True
        if self._event_refs.get(entity_id):
            return True
        if entity_id in self._pinned:
            return True
        if corpus is not None and corpus.mention_papers(entity_id):
            return True
        return False

    def live_entity_ids(self, corpus: Optional["Corpus"] = None) -> list[str]:
        return [eid for eid in self.entity_ids() if self.is_live(eid, corpus)]

    def orphaned_ids(self) -> list[str]:
        return sorted(self._orphans)

    def stats(self, corpus: Optional["Corpus"] = None) -> GraphStats:
        by_type: Counter = Counter()
        for eid in self.live_entity_ids(corpus):
            by_type[self.entity(eid).coarse_type] += 1
        links: Counter = Counter()
        for edge in self._edges.values():
            links[_LINK_BUCKETS.get(edge.category, "other")] += 1
        if corpus is not None:
            papers = corpus.paper_count()
        else:
            seen = {
                ref.paper_id
                for item in list(self._edges.values()) + list(self._events.values())
                for ref in item.provenance
            }
            papers = len(seen - SYNTHETIC_PAPER_IDS)
        return GraphStats(
            diseases=by_type["Disease"],
            chemicals=by_type["Chemical"],
            genes=by_type["Gene"],
            organisms=by_type["Organism"],
            chemical_gene=links["chemical_gene"],
            chemical_disease=links["chemical_disease"],
            gene_disease=links["gene_disease"],
            other_links=links["other"],
            papers=papers,
        )

    # --- removal -----------------------------------------------------------

    def remove_paper(self, paper_id: str, corpus: Optional["Corpus"] = None) -> RemovalSummary:
        self._check_mutable()
        touched: set[str] = set()
        edges_deleted = edges_weakened = 0
        for key in list(self._edges):
            edge = self._edges[key]
            kept = {r for r in edge.provenance if r.paper_id != paper_id}
            if len(kept) == len(edge.provenance):
                continue
            touched.update((edge.src, edge.dst))
            if kept:
                edge.provenance = kept
                edges_weakened += 1
            else:
                del self._edges[key]
                edges_deleted += 1
                self._adj[edge.src].discard(key)
                self._adj[edge.dst].discard(key)

        events_deleted = events_weakened = 0
        for key in list(self._events):
            event = self._events[key]
            kept = {r for r in event.provenance if r.paper_id != paper_id}
            if len(kept) == len(event.provenance):
                continue
            touched.update(event.roles.values())
            if kept:
                event.provenance = kept
                events_weakened += 1
            else:
                del self._events[key]
                events_deleted += 1
                for eid in event.roles.values():
                    self._event_refs[eid].discard(key)

        for eid, contribs in list(self._contribs.items()):
            kept_contribs = [c for c in contribs if c.source != paper_id]
            if len(kept_contribs) == len(contribs):
                continue
            touched.add(eid)
            if kept_contribs:
                self._contribs[eid] = kept_contribs
            else:
                # Retain the last merged view so the id stays resolvable.
                self._shells[eid] = self.entity(eid)
                del self._contribs[eid]
            self._merged.pop(eid, None)

        if corpus is not None:
            corpus.drop_paper(paper_id)

        newly_orphaned = sorted(
            eid
            for eid in touched
            if self.has_entity(eid)
            and not self.is_live(eid, corpus)
            and eid not in self._orphans
        )
        self._orphans.update(newly_orphaned)
        return RemovalSummary(
            edges_deleted=edges_deleted,
            edges_weakened=edges_weakened,
            entities_orphaned=len(newly_orphaned),
            events_deleted=events_deleted,
            events_weakened=events_weakened,
            orphaned_ids=tuple(newly_orphaned),
        )


SYNTHETIC_PAPER_IDS = frozenset({"CTD"})
