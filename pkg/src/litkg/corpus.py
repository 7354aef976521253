"""Sentence-level corpus store with paper metadata and figure groundings.

The corpus keeps every ingested paper's sentences, typed mention spans, and
bibliographic metadata. It is the resolution target for provenance
references: a ``ProvenanceRef`` is sound when its (paper_id, sentence_idx)
names a stored sentence, or when the paper id is a registered synthetic
source (curated tables such as CTD contribute knowledge without sentences).
"""

from __future__ import annotations

import copy
from dataclasses import dataclass
from typing import Iterator, Optional

from .errors import UnknownSentence

SECTIONS = ("Title", "Abstract", "Body", "Caption", "Acknowledgements")

# Curated sources that carry provenance but no sentences.
SYNTHETIC_SOURCES = frozenset({"CTD"})


@dataclass(frozen=True)
class MentionRecord:
    char_span: tuple[int, int]
    entity_id: str
    coarse_type: str
    fine_types: frozenset[str] = frozenset()


@dataclass(frozen=True)
class SentenceRecord:
    paper_id: str
    sentence_idx: int
    section: str
    text: str
    mentions: tuple[MentionRecord, ...] = ()


@dataclass(frozen=True)
class PaperMeta:
    paper_id: str
    title: str
    authors: tuple[str, ...]
    affiliations: tuple[str, ...]
    acknowledgements: str
    pub_date: str
    peer_reviewed: bool
    content_hash: str = ""


@dataclass(frozen=True)
class GroundingTriple:
    """Links a subfigure panel to a graph entity named by an in-figure label."""

    figure_id: str
    marker: Optional[str]
    entity_id: str
    paper_id: Optional[str] = None


class Corpus:
    def __init__(self) -> None:
        self._papers: dict[str, PaperMeta] = {}
        self._sentences: dict[str, list[SentenceRecord]] = {}
        self._mention_index: dict[str, set[str]] = {}  # entity id -> paper ids
        self.groundings: list[GroundingTriple] = []
        self.synthetic_sources: set[str] = set(SYNTHETIC_SOURCES)
        self._ctx_cache: dict = {}

    # --- mutation ---------------------------------------------------------

    def add_paper(self, meta: PaperMeta, sentences: list[SentenceRecord]) -> None:
        self._papers[meta.paper_id] = meta
        self._sentences[meta.paper_id] = list(sentences)
        for s in sentences:
            for m in s.mentions:
                self._mention_index.setdefault(m.entity_id, set()).add(meta.paper_id)
        self._ctx_cache.clear()

    def drop_paper(self, paper_id: str) -> bool:
        if paper_id not in self._papers:
            return False
        del self._papers[paper_id]
        del self._sentences[paper_id]
        for papers in self._mention_index.values():
            papers.discard(paper_id)
        self.groundings = [g for g in self.groundings if g.paper_id != paper_id]
        self._ctx_cache.clear()
        return True

    def add_groundings(self, triples: list[GroundingTriple]) -> None:
        self.groundings.extend(triples)

    # --- lookup -------------------------------------------------------------

    def has_paper(self, paper_id: str) -> bool:
        return paper_id in self._papers

    def paper(self, paper_id: str) -> Optional[PaperMeta]:
        return self._papers.get(paper_id)

    def paper_ids(self) -> list[str]:
        return sorted(self._papers)

    def paper_count(self) -> int:
        return len(self._papers)

    def sentence_count(self, paper_id: str) -> int:
        return len(self._sentences.get(paper_id, ()))

    def sentence(self, paper_id: str, sentence_idx: int) -> SentenceRecord:
        sents = self._sentences.get(paper_id)
        if sents is None or not 0 <= sentence_idx < len(sents):
            raise UnknownSentence(f"no sentence ({paper_id!r}, {sentence_idx})")
        return sents[sentence_idx]

    def sentences_of(self, paper_id: str) -> list[SentenceRecord]:
        return list(self._sentences.get(paper_id, ()))

    def iter_sentences(self) -> Iterator[SentenceRecord]:
        for paper_id in sorted(self._sentences):
            yield from self._sentences[paper_id]

    def resolves(self, paper_id: str, sentence_idx: int) -> bool:
        if paper_id in self.synthetic_sources:
            return True
        sents = self._sentences.get(paper_id)
        return sents is not None and 0 <= sentence_idx < len(sents)

    def mention_papers(self, entity_id: str) -> set[str]:
        return set(self._mention_index.get(entity_id, ()))

    def papers_mentioning(self, entity_id: str) -> list[str]:
        return sorted(self._mention_index.get(entity_id, ()))

    # --- snapshots ---------------------------------------------------------

    def snapshot(self) -> "Corpus":
        clone = Corpus()
        clone._papers = copy.deepcopy(self._papers)
        clone._sentences = copy.deepcopy(self._sentences)
        clone._mention_index = {k: set(v) for k, v in self._mention_index.items()}
        clone.groundings = list(self.groundings)
        clone.synthetic_sources = set(self.synthetic_sources)
        return clone
