"""Bundle parsing, identifier canonicalization, CTD joins, incremental updates.

A document bundle is one paper's pre-annotated payload: metadata, sentences,
typed mention spans, and relation/event assertions. Parsing validates the
full schema up front; application to the graph is pre-validated so a bad
bundle never leaves partial state behind.
"""

from __future__ import annotations

import copy
import hashlib
import json
import re
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path
from typing import Any, Iterable, Optional

from .corpus import SECTIONS, Corpus, MentionRecord, PaperMeta, SentenceRecord
from .errors import (
    DuplicatePaper,
    EmptyIdentifier,
    MalformedRow,
    NonDenseSentenceIndex,
    OverlappingLists,
    SchemaError,
    SpanOutOfRange,
    UnknownEntity,
    UnknownSubtype,
)
from .kg_store import (
    ACTIONS,
    CATEGORIES,
    AssertionEdge,
    EntityRecord,
    EventAssertion,
    KnowledgeGraph,
    ProvenanceRef,
)

BUNDLE_FIELDS = (
    "paper_id",
    "title",
    "authors",
    "affiliations",
    "acknowledgements",
    "pub_date",
    "peer_reviewed",
    "sentences",
    "mentions",
    "relations",
    "events",
)

CTD_SOURCE_ID = "CTD"

_MESH_UID_RE = re.compile(r"^[CD][0-9]{6,9}$")
_INT_RE = re.compile(r"^[0-9]+$")
_SCHEME_RE = re.compile(r"^(?:MESH|GENE|TAX|LOCAL):")


# --- identifier canonicalization ------------------------------------------


def slugify(raw: str) -> str:
    s = raw.lower()
    s = re.sub(r"[^a-z0-9\s-]", "", s)
    s = re.sub(r"[\s-]+", "-", s).strip("-")
    if not s:
        raise EmptyIdentifier(f"{raw!r} has no usable characters")
    return s


def canonicalize_id(raw: str, coarse_type: str) -> str:
    """Apply the MESH:/GENE:/TAX:/LOCAL: namespacing scheme to a raw id."""
    if raw is None or not str(raw).strip():
        raise EmptyIdentifier("empty identifier")
    raw = str(raw).strip()
    if _SCHEME_RE.match(raw):
        return raw
    if _MESH_UID_RE.match(raw) and coarse_type in ("Chemical", "Disease", "Organism"):
        return f"MESH:{raw}"
    if _INT_RE.match(raw):
        if coarse_type == "Gene":
            return f"GENE:{raw}"
        if coarse_type == "Organism":
            return f"TAX:{raw}"
    return "LOCAL:" + slugify(raw)


# --- bundle schema ------------------------------------------------------------


@dataclass(frozen=True)
class BundleSentence:
    idx: int
    section: str
    text: str


@dataclass(frozen=True)
class BundleMention:
    sentence_idx: int
    char_span: tuple[int, int]
    entity: EntityRecord  # id still raw here; canonicalized at ingest


@dataclass(frozen=True)
class BundleRelation:
    sentence_idx: int
    src: str
    dst: str
    category: str
    subtype: str
    action: str


@dataclass(frozen=True)
class BundleEvent:
    sentence_idx: int
    event_type: str
    trigger: str
    roles: dict[str, str] = field(hash=False, default_factory=dict)


@dataclass(frozen=True)
class DocumentBundle:
    paper_id: str
    title: str
    authors: tuple[str, ...]
    affiliations: tuple[str, ...]
    acknowledgements: str
    pub_date: str
    peer_reviewed: bool
    sentences: tuple[BundleSentence, ...]
    mentions: tuple[BundleMention, ...]
    relations: tuple[BundleRelation, ...]
    events: tuple[BundleEvent, ...]
    content_hash: str


@dataclass(frozen=True)
class IngestSummary:
    entities_new: int
    edges_new: int
    edges_merged: int
    sentences: int
    events_new: int = 0


def _require(obj: dict, key: str, types, where: str):
    if key not in obj:
        raise SchemaError(f"{where}: missing field {key!r}")
    value = obj[key]
    if not isinstance(value, types):
        raise SchemaError(f"{where}: field {key!r} has wrong type")
    return value


def _str_list(obj: dict, key: str, where: str) -> tuple[str, ...]:
    value = _require(obj, key, list, where)
    if not all(isinstance(v, str) for v in value):
        raise SchemaError(f"{where}: field {key!r} must be a list of strings")
    return tuple(value)


def _span(value: Any, where: str) -> tuple[int, int]:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or not all(isinstance(v, int) and not isinstance(v, bool) for v in value)
    ):
        raise SchemaError(f"{where}: char_span must be [start, end]")
    start, end = value
    if start < 0 or start >= end:
        raise SpanOutOfRange(f"{where}: char_span [{start}, {end}] is not a valid span")
    return (start, end)


def _entity_stub(obj: Any, where: str) -> EntityRecord:
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: entity must be an object")
    raw_id = _require(obj, "id", str, where)
    name = _require(obj, "name", str, where)
    coarse = _require(obj, "coarse_type", str, where)
    from .kg_store import COARSE_TYPES

    if coarse not in COARSE_TYPES:
        raise SchemaError(f"{where}: unknown coarse_type {coarse!r}")
    fine = obj.get("fine_types", [])
    aliases = obj.get("aliases", [])
    if not isinstance(fine, list) or not all(isinstance(v, str) for v in fine):
        raise SchemaError(f"{where}: fine_types must be a list of strings")
    if not isinstance(aliases, list) or not all(isinstance(v, str) for v in aliases):
        raise SchemaError(f"{where}: aliases must be a list of strings")
    if "" in fine:
        raise SchemaError(f"{where}: fine_types may not contain the empty string")
    return EntityRecord(
        id=raw_id,
        name=name,
        coarse_type=coarse,
        fine_types=frozenset(fine),
        aliases=frozenset(aliases) | {name},
    )


def parse_document_bundle(data: bytes | str) -> DocumentBundle:
    raw = data.encode("utf-8") if isinstance(data, str) else data
    try:
        obj = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise SchemaError(f"bundle is not a UTF-8 JSON object: {exc}") from exc
    if not isinstance(obj, dict):
        raise SchemaError("bundle must be a single JSON object")
    unknown = set(obj) - set(BUNDLE_FIELDS)
    if unknown:
        raise SchemaError(f"unexpected bundle fields: {sorted(unknown)}")

    paper_id = _require(obj, "paper_id", str, "bundle")
    if not paper_id.strip():
        raise SchemaError("bundle: paper_id must be non-empty")
    title = _require(obj, "title", str, "bundle")
    authors = _str_list(obj, "authors", "bundle")
    affiliations = _str_list(obj, "affiliations", "bundle")
    acknowledgements = _require(obj, "acknowledgements", str, "bundle")
    pub_date = _require(obj, "pub_date", str, "bundle")
    try:
        date.fromisoformat(pub_date)
    except ValueError as exc:
        raise SchemaError(f"bundle: pub_date {pub_date!r} is not an ISO-8601 date") from exc
    peer_reviewed = obj.get("peer_reviewed")
    if not isinstance(peer_reviewed, bool):
        raise SchemaError("bundle: peer_reviewed must be a boolean")

    raw_sentences = _require(obj, "sentences", list, "bundle")
    sentences = []
    for i, s in enumerate(raw_sentences):
        where = f"sentences[{i}]"
        if not isinstance(s, dict):
            raise SchemaError(f"{where}: must be an object")
        idx = _require(s, "idx", int, where)
        section = _require(s, "section", str, where)
        if section not in SECTIONS:
            raise SchemaError(f"{where}: unknown section {section!r}")
        text = _require(s, "text", str, where)
        sentences.append(BundleSentence(idx=idx, section=section, text=text))
    n = len(sentences)
    if sorted(s.idx for s in sentences) != list(range(n)):
        raise NonDenseSentenceIndex(f"bundle {paper_id!r}: sentence idx values are not dense 0..{n - 1}")
    sentences.sort(key=lambda s: s.idx)

    def check_sentence_idx(value: Any, where: str) -> int:
        if not isinstance(value, int) or isinstance(value, bool):
            raise SchemaError(f"{where}: sentence_idx must be an integer")
        if not 0 <= value < n:
            raise SpanOutOfRange(f"{where}: sentence_idx {value} outside 0..{n - 1}")
        return value

    raw_mentions = _require(obj, "mentions", list, "bundle")
    mentions = []
    for i, m in enumerate(raw_mentions):
        where = f"mentions[{i}]"
        if not isinstance(m, dict):
            raise SchemaError(f"{where}: must be an object")
        sidx = check_sentence_idx(m.get("sentence_idx"), where)
        span = _span(m.get("char_span"), where)
        if span[1] > len(sentences[sidx].text):
            raise SpanOutOfRange(f"{where}: char_span {list(span)} exceeds sentence length")
        entity = _entity_stub(m.get("entity"), where)
        mentions.append(BundleMention(sentence_idx=sidx, char_span=span, entity=entity))

    raw_relations = _require(obj, "relations", list, "bundle")
    relations = []
    for i, r in enumerate(raw_relations):
        where = f"relations[{i}]"
        if not isinstance(r, dict):
            raise SchemaError(f"{where}: must be an object")
        sidx = check_sentence_idx(r.get("sentence_idx"), where)
        relations.append(
            BundleRelation(
                sentence_idx=sidx,
                src=_require(r, "src", str, where),
                dst=_require(r, "dst", str, where),
                category=_require(r, "category", str, where),
                subtype=_require(r, "subtype", str, where),
                action=_require(r, "action", str, where),
            )
        )

    raw_events = _require(obj, "events", list, "bundle")
    events = []
    for i, e in enumerate(raw_events):
        where = f"events[{i}]"
        if not isinstance(e, dict):
            raise SchemaError(f"{where}: must be an object")
        sidx = check_sentence_idx(e.get("sentence_idx"), where)
        roles = e.get("roles")
        if not isinstance(roles, dict) or not roles:
            raise SchemaError(f"{where}: roles must be a non-empty object")
        if not all(isinstance(k, str) and isinstance(v, str) for k, v in roles.items()):
            raise SchemaError(f"{where}: roles must map role names to entity ids")
        events.append(
            BundleEvent(
                sentence_idx=sidx,
                event_type=_require(e, "event_type", str, where),
                trigger=_require(e, "trigger", str, where),
                roles=dict(roles),
            )
        )

    return DocumentBundle(
        paper_id=paper_id,
        title=title,
        authors=authors,
        affiliations=affiliations,
        acknowledgements=acknowledgements,
        pub_date=pub_date,
        peer_reviewed=peer_reviewed,
        sentences=tuple(sentences),
        mentions=tuple(mentions),
        relations=tuple(relations),
        events=tuple(events),
        content_hash=hashlib.sha256(raw).hexdigest(),
    )


# --- bundle application ---------------------------------------------------


def _resolve_mention_ids(bundle: DocumentBundle) -> dict[str, str]:
    """Map raw mention ids (and their canonical forms) to canonical ids."""
    mapping: dict[str, str] = {}
    for m in bundle.mentions:
        canonical = canonicalize_id(m.entity.id, m.entity.coarse_type)
        mapping[m.entity.id] = canonical
        mapping[canonical] = canonical
    return mapping


def _normalize_mentions(mentions: list[MentionRecord]) -> tuple[MentionRecord, ...]:
    # Overlaps are resolved longest-first so typed matching sees disjoint spans.
    ordered = sorted(
        mentions,
        key=lambda m: (-(m.char_span[1] - m.char_span[0]), m.char_span[0], m.entity_id),
    )
    kept: list[MentionRecord] = []
    for m in ordered:
        if all(
            m.char_span[1] <= k.char_span[0] or m.char_span[0] >= k.char_span[1]
            for k in kept
        ):
            kept.append(m)
    kept.sort(key=lambda m: m.char_span)
    return tuple(kept)


def ingest_bundle(graph: KnowledgeGraph, corpus: Corpus, bundle: DocumentBundle) -> IngestSummary:
    paper_id = bundle.paper_id
    existing = corpus.paper(paper_id)
    if existing is not None:
        if existing.content_hash == bundle.content_hash:
            return IngestSummary(0, 0, 0, 0, 0)
        raise DuplicatePaper(f"paper {paper_id!r} already ingested with different content")

    id_map = _resolve_mention_ids(bundle)

    def resolve(raw: str, where: str) -> str:
        if raw in id_map:
            return id_map[raw]
        if graph.has_entity(raw):
            return raw
        raise UnknownEntity(f"{where}: {raw!r} is not mentioned in the bundle or stored")

    # Pre-validate assertions so failures cannot leave partial state.
    resolved_relations = []
    for i, rel in enumerate(bundle.relations):
        where = f"relations[{i}]"
        if rel.category not in CATEGORIES:
            raise UnknownSubtype(f"{where}: unknown category {rel.category!r}")
        registry = (
            graph.registries.events if rel.category == "Event" else graph.registries.relations
        )
        if rel.subtype not in registry:
            raise UnknownSubtype(f"{where}: subtype {rel.subtype!r} not in registry")
        if rel.action not in ACTIONS:
            raise UnknownSubtype(f"{where}: unknown action {rel.action!r}")
        resolved_relations.append((resolve(rel.src, where), resolve(rel.dst, where), rel))
    resolved_events = []
    for i, ev in enumerate(bundle.events):
        where = f"events[{i}]"
        if ev.event_type not in graph.registries.events:
            raise UnknownSubtype(f"{where}: event type {ev.event_type!r} not in registry")
        resolved_events.append(
            ({role: resolve(eid, where) for role, eid in ev.roles.items()}, ev)
        )

    entities_new = 0
    for m in bundle.mentions:
        canonical = id_map[m.entity.id]
        if not graph.has_entity(canonical):
            entities_new += 1
        record = EntityRecord(
            id=canonical,
            name=m.entity.name,
            coarse_type=m.entity.coarse_type,
            fine_types=m.entity.fine_types,
            aliases=m.entity.aliases,
        )
        graph.upsert_entity(record, source=paper_id)

    per_sentence: dict[int, list[MentionRecord]] = {}
    for m in bundle.mentions:
        per_sentence.setdefault(m.sentence_idx, []).append(
            MentionRecord(
                char_span=m.char_span,
                entity_id=id_map[m.entity.id],
                coarse_type=m.entity.coarse_type,
                fine_types=m.entity.fine_types,
            )
        )
    sentence_records = [
        SentenceRecord(
            paper_id=paper_id,
            sentence_idx=s.idx,
            section=s.section,
            text=s.text,
            mentions=_normalize_mentions(per_sentence.get(s.idx, [])),
        )
        for s in bundle.sentences
    ]
    meta = PaperMeta(
        paper_id=paper_id,
        title=bundle.title,
        authors=bundle.authors,
        affiliations=bundle.affiliations,
        acknowledgements=bundle.acknowledgements,
        pub_date=bundle.pub_date,
        peer_reviewed=bundle.peer_reviewed,
        content_hash=bundle.content_hash,
    )
    corpus.add_paper(meta, sentence_records)

    edges_new = edges_merged = 0
    for src, dst, rel in resolved_relations:
        edge = AssertionEdge(
            src=src,
            dst=dst,
            category=rel.category,
            subtype=rel.subtype,
            action=rel.action,
            provenance={ProvenanceRef(paper_id, rel.sentence_idx)},
        )
        if graph.has_edge(edge.key):
            edges_merged += 1
        else:
            edges_new += 1
        graph.add_assertion(edge)

    events_new = 0
    for roles, ev in resolved_events:
        event = EventAssertion(
            event_type=ev.event_type,
            trigger=ev.trigger,
            roles=roles,
            provenance={ProvenanceRef(paper_id, ev.sentence_idx)},
        )
        if not graph.has_event(event.key):
            events_new += 1
        graph.add_event(event)

    return IngestSummary(
        entities_new=entities_new,
        edges_new=edges_new,
        edges_merged=edges_merged,
        sentences=len(bundle.sentences),
        events_new=events_new,
    )


# --- CTD tables ---------------------------------------------------------------


@dataclass(frozen=True)
class CtdRow:
    subject_id: str
    object_id: str
    category: str
    subtype: str
    action: str
    source: str = CTD_SOURCE_ID


@dataclass(frozen=True)
class CtdSummary:
    added: int
    skipped: int


def parse_ctd_table(text: str, relations: frozenset[str]) -> list[CtdRow]:
    """Parse a tab-separated CTD-style table; ``#`` starts a comment line."""
    from .kg_store import validate_entity_id
    from .errors import MalformedId

    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        cols = stripped.split("\t")
        if len(cols) != 5:
            raise MalformedRow(f"line {lineno}: expected 5 tab-separated columns", line=lineno)
        subject_id, object_id, category, subtype, action = (c.strip() for c in cols)
        try:
            validate_entity_id(subject_id)
            validate_entity_id(object_id)
        except MalformedId as exc:
            raise MalformedRow(f"line {lineno}: {exc}", line=lineno) from exc
        if category not in CATEGORIES or category == "Event":
            raise MalformedRow(f"line {lineno}: bad category {category!r}", line=lineno)
        if subtype not in relations:
            raise MalformedRow(f"line {lineno}: subtype {subtype!r} not in registry", line=lineno)
        if action not in ACTIONS:
            raise MalformedRow(f"line {lineno}: bad action {action!r}", line=lineno)
        rows.append(CtdRow(subject_id, object_id, category, subtype, action))
    return rows


def link_ctd(graph: KnowledgeGraph, rows: Iterable[CtdRow]) -> CtdSummary:
    """Join curated rows onto stored entities; never creates entities."""
    added = skipped = 0
    for row in rows:
        if not (graph.has_entity(row.subject_id) and graph.has_entity(row.object_id)):
            skipped += 1
            continue
        graph.add_assertion(
            AssertionEdge(
                src=row.subject_id,
                dst=row.object_id,
                category=row.category,
                subtype=row.subtype,
                action=row.action,
                provenance={ProvenanceRef(row.source, 0)},
            )
        )
        added += 1
    return CtdSummary(added=added, skipped=skipped)


# --- incremental updates ---------------------------------------------------


@dataclass(frozen=True)
class UpdateManifest:
    added: tuple[str, ...] = ()
    removed: tuple[str, ...] = ()
    updated: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "added": list(self.added),
            "removed": list(self.removed),
            "updated": list(self.updated),
        }


@dataclass
class UpdateError:
    paper: str
    code: str
    message: str


@dataclass
class UpdateSummary:
    added: list[str] = field(default_factory=list)
    removed: list[str] = field(default_factory=list)
    updated: list[str] = field(default_factory=list)
    errors: list[UpdateError] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "added": list(self.added),
            "removed": list(self.removed),
            "updated": list(self.updated),
            "errors": [
                {"paper": e.paper, "code": e.code, "message": e.message} for e in self.errors
            ],
        }


def parse_manifest(data: bytes | str | dict) -> UpdateManifest:
    if isinstance(data, (bytes, str)):
        try:
            obj = json.loads(data)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"manifest is not valid JSON: {exc}") from exc
    else:
        obj = data
    if not isinstance(obj, dict):
        raise SchemaError("manifest must be a JSON object")
    unknown = set(obj) - {"added", "removed", "updated"}
    if unknown:
        raise SchemaError(f"unexpected manifest fields: {sorted(unknown)}")
    out = {}
    for key in ("added", "removed", "updated"):
        value = obj.get(key, [])
        if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
            raise SchemaError(f"manifest field {key!r} must be a list of strings")
        out[key] = tuple(value)
    return UpdateManifest(**out)


def _restore(target, backup) -> None:
    target.__dict__.clear()
    target.__dict__.update(backup.__dict__)


def apply_update(
    graph: KnowledgeGraph,
    corpus: Corpus,
    manifest: UpdateManifest,
    base_dir: str | Path | None = None,
) -> UpdateSummary:
    """Apply removals, then per-paper updates, then additions.

    A failing paper is rolled back and reported; the rest of the manifest
    still applies.
    """
    base = Path(base_dir) if base_dir is not None else None

    def read(path_str: str) -> bytes:
        path = Path(path_str)
        if base is not None and not path.is_absolute():
            path = base / path
        return path.read_bytes()

    summary = UpdateSummary()

    parsed: dict[str, Optional[DocumentBundle]] = {}
    ids_per_list: dict[str, list[str]] = {"added": [], "updated": []}
    for list_name, paths in (("added", manifest.added), ("updated", manifest.updated)):
        for path in paths:
            try:
                bundle = parse_document_bundle(read(path))
            except (OSError, SchemaError, SpanOutOfRange, NonDenseSentenceIndex) as exc:
                parsed[path] = None
                code = exc.code if hasattr(exc, "code") else "SchemaError"
                summary.errors.append(UpdateError(paper=path, code=code, message=str(exc)))
                continue
            parsed[path] = bundle
            ids_per_list[list_name].append(bundle.paper_id)

    seen: dict[str, str] = {}
    for list_name, ids in (
        ("added", ids_per_list["added"]),
        ("removed", list(manifest.removed)),
        ("updated", ids_per_list["updated"]),
    ):
        for paper_id in ids:
            if paper_id in seen:
                raise OverlappingLists(
                    f"paper {paper_id!r} appears in both {seen[paper_id]!r} and {list_name!r}"
                )
            seen[paper_id] = list_name

    for paper_id in manifest.removed:
        graph.remove_paper(paper_id, corpus)
        summary.removed.append(paper_id)

    for path in manifest.updated:
        bundle = parsed.get(path)
        if bundle is None:
            continue
        graph_backup = copy.deepcopy(graph)
        corpus_backup = copy.deepcopy(corpus)
        try:
            graph.remove_paper(bundle.paper_id, corpus)
            ingest_bundle(graph, corpus, bundle)
        except Exception as exc:  # roll back just this paper
            _restore(graph, graph_backup)
            _restore(corpus, corpus_backup)
            code = getattr(exc, "code", "InternalError")
            summary.errors.append(UpdateError(paper=bundle.paper_id, code=code, message=str(exc)))
            continue
        summary.updated.append(bundle.paper_id)

    for path in manifest.added:
        bundle = parsed.get(path)
        if bundle is None:
            continue
        graph_backup = copy.deepcopy(graph)
        corpus_backup = copy.deepcopy(corpus)
        try:
            ingest_bundle(graph, corpus, bundle)
        except Exception as exc:
            _restore(graph, graph_backup)
            _restore(corpus, corpus_backup)
            code = getattr(exc, "code", "InternalError")
            summary.errors.append(UpdateError(paper=bundle.paper_id, code=code, message=str(exc)))
            continue
        summary.added.append(bundle.paper_id)

    return summary
