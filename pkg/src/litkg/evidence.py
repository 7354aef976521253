"""Evidence sentence retrieval and meta-symbol pattern matching.

Sentences are scored against a free-text query by cosine similarity of
context embeddings: each sentence is pooled with its left and right
neighbors (weights 0.25/0.5/0.25, renormalized at paper boundaries) and the
result is L2-normalized. The embedding provider is pluggable; the default
is a deterministic feature-hashed term-frequency encoder, and precomputed
vectors can be supplied through a sidecar file.

Meta queries mix literal tokens with type placeholders (CHEMICAL inhibits
GENE); a sentence matches when every placeholder is satisfied by a distinct
typed mention and every literal occurs as a token.
"""

from __future__ import annotations

import hashlib
import itertools
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Protocol

import numpy as np

from .corpus import Corpus, MentionRecord, SentenceRecord
from .errors import EmptyQuery, InvalidQuery, MissingVector, UnknownPlaceholder
from .registry import default_registries

DEFAULT_DIM = 256

_TOKEN_RE = re.compile(r"[a-z0-9]+")
_TOKEN_SPAN_RE = re.compile(r"[A-Za-z0-9]+")

CONTEXT_WEIGHTS = (0.25, 0.5, 0.25)  # prev, current, next


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


class EmbeddingProvider(Protocol):
    name: str
    dim: int

    def embed(self, text: str) -> np.ndarray: ...


def _unit_basis(dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=np.float64)
    v[0] = 1.0
    return v


class HashedTfProvider:
    """Signed feature-hashed term frequencies, L2-normalized.

    Deterministic across runs and processes (keyless blake2b), so rankings
    are reproducible without any model weights.
    """

    def __init__(self, dim: int = DEFAULT_DIM):
        if dim < 1:
            raise InvalidQuery("embedding dimension must be >= 1")
        self.dim = dim
        self.name = f"hashed-tf-{dim}"

    def embed(self, text: str) -> np.ndarray:
        tokens = tokenize(text)
        if not tokens:
            return _unit_basis(self.dim)
        v = np.zeros(self.dim, dtype=np.float64)
        for token in tokens:
            h = int.from_bytes(
                hashlib.blake2b(token.encode("utf-8"), digest_size=8).digest(), "big"
            )
            sign = 1.0 if (h & 1) == 0 else -1.0
            v[(h >> 1) % self.dim] += sign
        norm = float(np.linalg.norm(v))
        if norm == 0.0:  # total sign cancellation
            return _unit_basis(self.dim)
        return v / norm


class SidecarVectorProvider:
    """Precomputed vectors keyed by exact text, from ``id<TAB>v1,v2,...`` lines."""

    def __init__(
        self,
        vectors: dict[str, np.ndarray],
        dim: int,
        name: str = "sidecar",
        fallback: Optional[EmbeddingProvider] = None,
    ):
        self.dim = dim
        self.name = name
        self.fallback = fallback
        self._vectors = {}
        for key, vec in vectors.items():
            arr = np.asarray(vec, dtype=np.float64)
            if arr.shape != (dim,):
                raise InvalidQuery(f"vector for {key!r} has dimension {arr.shape}, expected {dim}")
            norm = float(np.linalg.norm(arr))
            self._vectors[key] = arr / norm if norm > 0 else _unit_basis(dim)

    @classmethod
    def from_file(cls, path: str | Path, fallback: Optional[EmbeddingProvider] = None):
        vectors: dict[str, np.ndarray] = {}
        dim = None
        for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            if not line.strip():
                continue
            try:
                key, values = line.split("\t", 1)
                vec = np.array([float(x) for x in values.split(",")], dtype=np.float64)
            except ValueError as exc:
                raise InvalidQuery(f"sidecar line {lineno}: {exc}") from exc
            if dim is None:
                dim = len(vec)
            elif len(vec) != dim:
                raise InvalidQuery(f"sidecar line {lineno}: dimension {len(vec)} != {dim}")
            vectors[key] = vec
        if dim is None:
            raise InvalidQuery("sidecar file contains no vectors")
        return cls(vectors, dim=dim, fallback=fallback)

    def embed(self, text: str) -> np.ndarray:
        vec = self._vectors.get(text)
        if vec is not None:
            return vec
        if self.fallback is not None:
            return self.fallback.embed(text)
        raise MissingVector(f"no precomputed vector for text {text!r}")


def embed_context(
    provider: EmbeddingProvider,
    corpus: Corpus,
    paper_id: str,
    sentence_idx: int,
) -> np.ndarray:
    """Neighbor-pooled sentence embedding, cached per (provider, sentence)."""
    cache_key = (provider.name, paper_id, sentence_idx)
    cached = corpus._ctx_cache.get(cache_key)
    if cached is not None:
        return cached
    current = corpus.sentence(paper_id, sentence_idx)
    n = corpus.sentence_count(paper_id)
    parts: list[tuple[float, str]] = []
    if sentence_idx > 0:
        parts.append((CONTEXT_WEIGHTS[0], corpus.sentence(paper_id, sentence_idx - 1).text))
    parts.append((CONTEXT_WEIGHTS[1], current.text))
    if sentence_idx < n - 1:
        parts.append((CONTEXT_WEIGHTS[2], corpus.sentence(paper_id, sentence_idx + 1).text))
    total = sum(w for w, _ in parts)
    v = np.zeros(provider.dim, dtype=np.float64)
    for weight, text in parts:
        v = v + (weight / total) * provider.embed(text)
    norm = float(np.linalg.norm(v))
    if norm < 1e-12:  # pathological cancellation between neighbors
        v = provider.embed(current.text)
    else:
        v = v / norm
    corpus._ctx_cache[cache_key] = v
    return v


@dataclass(frozen=True)
class EvidenceHit:
    sentence: SentenceRecord
    similarity: float


def rank_evidence(
    provider: EmbeddingProvider,
    corpus: Corpus,
    query: str,
    candidates: Optional[Iterable[tuple[str, int]]] = None,
    top_n: int = 10,
) -> list[EvidenceHit]:
    if top_n < 1:
        raise InvalidQuery("top_n must be >= 1")
    if not query or not query.strip():
        raise EmptyQuery("evidence query is empty")
    query_vec = provider.embed(query)
    if candidates is None:
        sentences = list(corpus.iter_sentences())
    else:
        sentences = [corpus.sentence(pid, idx) for pid, idx in candidates]
    hits = []
    for sent in sentences:
        ctx = embed_context(provider, corpus, sent.paper_id, sent.sentence_idx)
        sim = float(np.clip(np.dot(ctx, query_vec), -1.0, 1.0))
        hits.append(EvidenceHit(sentence=sent, similarity=sim))
    hits.sort(key=lambda h: (-h.similarity, h.sentence.paper_id, h.sentence.sentence_idx))
    return hits[:top_n]


# --- meta-symbol queries ------------------------------------------------------

COARSE_PLACEHOLDERS = {
    "CHEMICAL": "Chemical",
    "GENE": "Gene",
    "PROTEIN": "Gene",  # meta-symbol alias: proteins live under the Gene type
    "DISEASE": "Disease",
    "ORGANISM": "Organism",
}

MIN_PLACEHOLDER_LEN = 4


def normalize_fine_type(name: str) -> str:
    return re.sub(r"[\s/-]+", "_", name.strip()).upper()


@dataclass(frozen=True)
class Literal:
    text: str


@dataclass(frozen=True)
class Placeholder:
    label: str  # coarse type name or normalized fine type name
    scope: str  # "coarse" | "fine"


@dataclass(frozen=True)
class MetaQuery:
    tokens: tuple


def parse_meta_query(text: str, fine_types: Optional[Iterable[str]] = None) -> MetaQuery:
    if not text or not text.strip():
        raise EmptyQuery("meta query is empty")
    if fine_types is None:
        fine_types = default_registries().fine_types
    fine_vocab = {normalize_fine_type(f) for f in fine_types}
    tokens: list = []
    for raw in text.split():
        if raw.isupper():
            if raw in COARSE_PLACEHOLDERS:
                tokens.append(Placeholder(label=COARSE_PLACEHOLDERS[raw], scope="coarse"))
                continue
            if raw in fine_vocab:
                tokens.append(Placeholder(label=raw, scope="fine"))
                continue
            if len(raw) >= MIN_PLACEHOLDER_LEN:
                raise UnknownPlaceholder(f"unknown placeholder {raw!r}")
        tokens.append(Literal(text=raw.lower()))
    return MetaQuery(tokens=tuple(tokens))


@dataclass(frozen=True)
class MetaMatch:
    sentence: SentenceRecord
    matched_tokens: int
    span: int


def _mention_satisfies(mention: MentionRecord, ph: Placeholder) -> bool:
    if ph.scope == "coarse":
        return mention.coarse_type == ph.label
    return ph.label in {normalize_fine_type(f) for f in mention.fine_types}


def _literal_span(sentence_text: str, literal: Literal) -> Optional[tuple[int, int]]:
    for m in _TOKEN_SPAN_RE.finditer(sentence_text):
        if m.group().lower() == literal.text:
            return (m.start(), m.end())
    return None


def match_sentence(sentence: SentenceRecord, mq: MetaQuery) -> Optional[MetaMatch]:
    """Match one sentence; returns token count and tightest matched char span."""
    fixed_spans: list[tuple[int, int]] = []
    placeholders: list[Placeholder] = []
    for token in mq.tokens:
        if isinstance(token, Literal):
            span = _literal_span(sentence.text, token)
            if span is None:
                return None
            fixed_spans.append(span)
        else:
            placeholders.append(token)

    best_span: Optional[int] = None
    if placeholders:
        candidates = [
            [m for m in sentence.mentions if _mention_satisfies(m, ph)] for ph in placeholders
        ]
        if any(not c for c in candidates):
            return None
        for combo in itertools.product(*candidates):
            if len({id(m) for m in combo}) != len(combo):  # placeholders need distinct mentions
                continue
            spans = fixed_spans + [m.char_span for m in combo]
            width = max(e for _, e in spans) - min(s for s, _ in spans)
            if best_span is None or width < best_span:
                best_span = width
        if best_span is None:
            return None
    else:
        if fixed_spans:
            best_span = max(e for _, e in fixed_spans) - min(s for s, _ in fixed_spans)
        else:
            best_span = 0

    return MetaMatch(sentence=sentence, matched_tokens=len(mq.tokens), span=best_span)


def match_meta_query(corpus: Corpus, mq: MetaQuery, top_n: int = 10) -> list[MetaMatch]:
    if top_n < 1:
        raise InvalidQuery("top_n must be >= 1")
    matches = []
    for sentence in corpus.iter_sentences():
        hit = match_sentence(sentence, mq)
        if hit is not None:
            matches.append(hit)
    matches.sort(
        key=lambda m: (
            -m.matched_tokens,
            m.span,
            m.sentence.paper_id,
            m.sentence.sentence_idx,
        )
    )
    return matches[:top_n]
