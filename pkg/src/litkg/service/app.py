"""FastAPI application exposing the knowledge-graph engine.

Read endpoints operate on published snapshots and never block behind the
writer; admin endpoints serialize through the single writer lock. Errors
surface as ``{"error": {"code", "message", "detail?"}}`` with stable codes.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, PlainTextResponse, Response
from fastapi.staticfiles import StaticFiles

from ..errors import InvalidQuery, LitkgError, UnknownFormat
from ..evidence import match_meta_query, parse_meta_query, rank_evidence
from ..export import export_graph, export_subgraph
from ..facets import Constraint, facet_counts, heatmap, parse_constraint
from ..ingest import UpdateManifest
from ..pathrank import PathQuery, ScoringMode, connection_subgraph, enumerate_paths, rank_paths, score_path
from ..report import ReportRequest, generate_report, render_report
from . import schemas
from .state import ServiceState


def _canonical_json_response(obj) -> Response:
    body = json.dumps(obj, ensure_ascii=False, separators=(",", ":")) + "\n"
    return Response(content=body, media_type="application/json")


def _scoring_mode(value: str) -> ScoringMode:
    try:
        return ScoringMode(value)
    except ValueError as exc:
        raise InvalidQuery(f"unknown scoring mode {value!r}") from exc


def _parse_constraints(raw: list[str]) -> list[Constraint]:
    return [parse_constraint(item) for item in raw]


def _entity_model(rec) -> dict:
    return {
        "id": rec.id,
        "name": rec.name,
        "coarse_type": rec.coarse_type,
        "fine_types": sorted(rec.fine_types),
        "aliases": sorted(rec.aliases),
    }


def _path_model(path) -> dict:
    return {
        "nodes": list(path.nodes),
        "edges": [list(k) for k in path.edges],
        "score": str(path.score),
        "score_value": float(path.score),
    }


def _ref_model(corpus, ref) -> dict:
    out = {
        "paper_id": ref.paper_id,
        "sentence_idx": ref.sentence_idx,
        "char_span": list(ref.char_span) if ref.char_span else None,
    }
    if corpus.resolves(ref.paper_id, ref.sentence_idx) and ref.paper_id not in corpus.synthetic_sources:
        out["text"] = corpus.sentence(ref.paper_id, ref.sentence_idx).text
    else:
        out["text"] = None
    return out


def _mention_model(m) -> dict:
    return {
        "char_span": list(m.char_span),
        "entity_id": m.entity_id,
        "coarse_type": m.coarse_type,
        "fine_types": sorted(m.fine_types),
    }


def create_app(state: ServiceState, ui_dir: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="litkg", version="0.1.0")
    app.state.litkg = state

    @app.exception_handler(LitkgError)
    async def litkg_error_handler(_request: Request, exc: LitkgError):
        return JSONResponse(status_code=exc.http_status, content=exc.envelope())

    @app.exception_handler(RequestValidationError)
    async def validation_error_handler(_request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=422,
            content={
                "error": {
                    "code": "ValidationError",
                    "message": "request validation failed",
                    "detail": json.loads(json.dumps(exc.errors(), default=str)),
                }
            },
        )

    # --- read endpoints -----------------------------------------------------

    @app.get("/stats")
    def get_stats():
        graph, corpus = state.snapshot_graph, state.snapshot_corpus
        return _canonical_json_response(graph.stats(corpus).to_dict())

    @app.get("/entities")
    def get_entities(q: str = "", limit: int = 20):
        graph = state.snapshot_graph
        hits = graph.search_entities(q, limit=limit)
        return {"query": q, "entities": [_entity_model(r) for r in hits]}

    def _path_query(
        src: str,
        dst: str,
        hops: int,
        top_k: int,
        mode: str,
        directed: bool,
        min_support: int,
        category: list[str],
    ) -> PathQuery:
        return PathQuery(
            src=src,
            dst=dst,
            max_hops=hops,
            top_k=top_k,
            mode=_scoring_mode(mode),
            directed=directed,
            min_edge_support=min_support,
            categories=frozenset(category) if category else None,
        )

    @app.get("/paths")
    def get_paths(
        src: str,
        dst: str,
        hops: int = 3,
        top_k: int = 20,
        mode: str = "AvgSupport",
        directed: bool = False,
        min_support: int = 1,
        category: list[str] = Query(default=[]),
    ):
        graph = state.snapshot_graph
        q = _path_query(src, dst, hops, top_k, mode, directed, min_support, category)
        enumeration = enumerate_paths(graph, q)
        for path in enumeration.paths:
            path.score = score_path(graph, path, q.mode)
        ranked = rank_paths(enumeration.paths, q.top_k)
        return {
            "src": src,
            "dst": dst,
            "paths": [_path_model(p) for p in ranked],
            "truncated": enumeration.truncated,
        }

    @app.get("/subgraph")
    def get_subgraph(
        src: str,
        dst: str,
        hops: int = 3,
        top_k: int = 20,
        mode: str = "AvgSupport",
        directed: bool = False,
        min_support: int = 1,
        category: list[str] = Query(default=[]),
        format: str = "json",
    ):
        graph, corpus = state.snapshot_graph, state.snapshot_corpus
        q = _path_query(src, dst, hops, top_k, mode, directed, min_support, category)
        sub = connection_subgraph(graph, q)
        if format in ("canonical", "graph-description"):
            return PlainTextResponse(export_subgraph(graph, sub, format=format))
        if format != "json":
            raise UnknownFormat(f"unknown subgraph format {format!r}")
        return {
            "src": sub.src,
            "dst": sub.dst,
            "truncated": sub.truncated,
            "nodes": [_entity_model(graph.entity(eid)) for eid in sub.node_ids],
            "paths": [_path_model(p) for p in sub.paths],
            "edges": [
                {
                    "key": list(key),
                    "salience": str(sub.edge_salience[key]),
                    "salience_value": float(sub.edge_salience[key]),
                    "support": graph.support(key),
                    "evidence": [_ref_model(corpus, r) for r in sub.evidence[key]],
                }
                for key in sorted(sub.edge_salience)
            ],
        }

    @app.post("/evidence")
    def post_evidence(body: schemas.EvidenceRequest):
        corpus = state.snapshot_corpus
        candidates = [tuple(c) for c in body.candidates] if body.candidates else None
        hits = rank_evidence(
            state.provider, corpus, body.query, candidates=candidates, top_n=body.top_n
        )
        return {
            "query": body.query,
            "hits": [
                {
                    "paper_id": h.sentence.paper_id,
                    "sentence_idx": h.sentence.sentence_idx,
                    "section": h.sentence.section,
                    "text": h.sentence.text,
                    "similarity": h.similarity,
                    "mentions": [_mention_model(m) for m in h.sentence.mentions],
                }
                for h in hits
            ],
        }

    @app.post("/metaquery")
    def post_metaquery(body: schemas.MetaQueryRequest):
        graph, corpus = state.snapshot_graph, state.snapshot_corpus
        mq = parse_meta_query(body.pattern, fine_types=graph.registries.fine_types)
        matches = match_meta_query(corpus, mq, top_n=body.top_n)
        tokens = []
        for token in mq.tokens:
            if hasattr(token, "label"):
                tokens.append({"placeholder": token.label, "scope": token.scope})
            else:
                tokens.append({"literal": token.text})
        return {
            "pattern": body.pattern,
            "tokens": tokens,
            "matches": [
                {
                    "paper_id": m.sentence.paper_id,
                    "sentence_idx": m.sentence.sentence_idx,
                    "text": m.sentence.text,
                    "matched_tokens": m.matched_tokens,
                    "span": m.span,
                    "mentions": [_mention_model(x) for x in m.sentence.mentions],
                }
                for m in matches
            ],
        }

    @app.get("/facets")
    def get_facets(
        kind: str,
        c: list[str] = Query(default=[]),
        limit: Optional[int] = None,
    ):
        graph = state.snapshot_graph
        constraints = _parse_constraints(c)
        counts = facet_counts(graph, constraints, kind, limit=limit)
        return {
            "kind": counts.kind,
            "constraints": sorted(f"{x.facet}:{x.value}" for x in constraints),
            "entries": [{"term": t, "count": n} for t, n in counts.entries],
        }

    @app.get("/heatmap")
    def get_heatmap(row: str, col: str, c: list[str] = Query(default=[])):
        graph = state.snapshot_graph
        matrix = heatmap(graph, _parse_constraints(c), row, col)
        return matrix.to_dict()

    @app.get("/report/{drug}")
    def get_report(
        drug: str,
        targets: list[str] = Query(default=[]),
        hops: int = 3,
        top_k: int = 20,
        mode: str = "AvgSupport",
        evidence: int = 5,
        format: str = "structured",
        generated: Optional[str] = None,
    ):
        graph, corpus = state.snapshot_graph, state.snapshot_corpus
        target_ids: list[str] = []
        for t in targets:
            target_ids.extend(x for x in t.split(",") if x)
        req = ReportRequest(
            drug=drug,
            targets=tuple(target_ids),
            max_hops=hops,
            top_k=top_k,
            mode=_scoring_mode(mode),
            evidence_per_answer=evidence,
        )
        rpt = generate_report(
            graph, corpus, req, config=state.report_config, generated=generated
        )
        if format == "markdown":
            return PlainTextResponse(render_report(rpt, "markdown"), media_type="text/markdown")
        if format != "structured":
            raise UnknownFormat(f"unknown report format {format!r}")
        return Response(content=render_report(rpt, "structured"), media_type="application/json")

    @app.get("/export")
    def get_export(format: str = "canonical"):
        graph, corpus = state.snapshot_graph, state.snapshot_corpus
        return PlainTextResponse(export_graph(graph, corpus, format=format))

    # --- admin endpoints ------------------------------------------------------

    @app.post("/admin/update")
    def post_update(body: schemas.UpdateManifestModel):
        manifest = UpdateManifest(
            added=tuple(body.added), removed=tuple(body.removed), updated=tuple(body.updated)
        )
        summary = state.apply_manifest(manifest)
        return summary.to_dict()

    @app.post("/admin/ctd")
    def post_ctd(body: schemas.CtdRequest):
        summary = state.apply_ctd_file(body.path)
        return {"added": summary.added, "skipped": summary.skipped}

    if ui_dir and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
