"""litkg: a literature knowledge-graph engine.

Ingests pre-annotated paper bundles into a typed, provenance-tracked
multigraph; answers entity-connection questions with support-ranked paths
and evidence sentences; and generates structured drug repurposing reports.
Served over HTTP by ``litkg.service`` with ``litkg`` as the thin CLI client.
"""

from .corpus import Corpus, GroundingTriple, MentionRecord, PaperMeta, SentenceRecord
from .kg_store import (
    ACTION_SYMBOLS,
    ACTIONS,
    CATEGORIES,
    COARSE_TYPES,
    AssertionEdge,
    EntityRecord,
    EventAssertion,
    GraphStats,
    KnowledgeGraph,
    ProvenanceRef,
    RemovalSummary,
)
from .registry import Registries, default_registries, load_registries

__version__ = "0.1.0"

__all__ = [
    "ACTIONS",
    "ACTION_SYMBOLS",
    "CATEGORIES",
    "COARSE_TYPES",
    "AssertionEdge",
    "Corpus",
    "EntityRecord",
    "EventAssertion",
    "GraphStats",
    "GroundingTriple",
    "KnowledgeGraph",
    "MentionRecord",
    "PaperMeta",
    "ProvenanceRef",
    "Registries",
    "RemovalSummary",
    "SentenceRecord",
    "default_registries",
    "load_registries",
    "__version__",
]
