"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, Field


class LinkCounts(BaseModel):
    chemical_gene: int
    chemical_disease: int
    gene_disease: int
    other: int


class StatsResponse(BaseModel):
    diseases: int
    chemicals: int
    genes: int
    organisms: int
    links: LinkCounts
    papers: int


class EntityModel(BaseModel):
    id: str
    name: str
    coarse_type: str
    fine_types: list[str]
    aliases: list[str]


class ProvenanceModel(BaseModel):
    paper_id: str
    sentence_idx: int
    char_span: Optional[list[int]] = None


class PathModel(BaseModel):
    nodes: list[str]
    edges: list[list[Any]]
    score: str
    score_value: float


class PathsResponse(BaseModel):
    src: str
    dst: str
    paths: list[PathModel]
    truncated: bool


class SubgraphEdgeModel(BaseModel):
    key: list[Any]
    salience: str
    salience_value: float
    support: int
    evidence: list[dict]


class SubgraphResponse(BaseModel):
    src: str
    dst: str
    truncated: bool
    nodes: list[EntityModel]
    paths: list[PathModel]
    edges: list[SubgraphEdgeModel]


class EvidenceRequest(BaseModel):
    query: str
    top_n: int = Field(default=10, ge=1)
    candidates: Optional[list[tuple[str, int]]] = None


class EvidenceHitModel(BaseModel):
    paper_id: str
    sentence_idx: int
    section: str
    text: str
    similarity: float
    mentions: list[dict]


class EvidenceResponse(BaseModel):
    query: str
    hits: list[EvidenceHitModel]


class MetaQueryRequest(BaseModel):
    pattern: str
    top_n: int = Field(default=10, ge=1)


class MetaMatchModel(BaseModel):
    paper_id: str
    sentence_idx: int
    text: str
    matched_tokens: int
    span: int
    mentions: list[dict]


class MetaQueryResponse(BaseModel):
    pattern: str
    tokens: list[dict]
    matches: list[MetaMatchModel]


class FacetEntryModel(BaseModel):
    term: str
    count: int


class FacetsResponse(BaseModel):
    kind: str
    constraints: list[str]
    entries: list[FacetEntryModel]


class HeatmapCellModel(BaseModel):
    row: str
    col: str
    action: str
    support: int


class HeatmapResponse(BaseModel):
    row_type: str
    col_type: str
    rows: list[str]
    cols: list[str]
    cells: list[HeatmapCellModel]


class UpdateManifestModel(BaseModel):
    added: list[str] = Field(default_factory=list)
    removed: list[str] = Field(default_factory=list)
    updated: list[str] = Field(default_factory=list)


class UpdateErrorModel(BaseModel):
    paper: str
    code: str
    message: str


class UpdateSummaryModel(BaseModel):
    added: list[str]
    removed: list[str]
    updated: list[str]
    errors: list[UpdateErrorModel]


class CtdRequest(BaseModel):
    path: str


class CtdResponse(BaseModel):
    added: int
    skipped: int
