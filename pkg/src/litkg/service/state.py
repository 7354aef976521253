"""Service state: one writer, snapshot-isolated readers, data-dir loading.

All mutations funnel through the writer lock and end by publishing fresh
graph/corpus snapshots; request handlers only ever touch the published
snapshots, so a read observes one consistent state end-to-end. Persistence
is load-at-start (bundles, CTD tables, figure layouts under the data dir)
plus replay of the append-only update log.
"""

from __future__ import annotations

import json
import logging
import threading
from pathlib import Path
from typing import Optional

from ..corpus import Corpus
from ..evidence import HashedTfProvider, SidecarVectorProvider
from ..figure_layout import analyze_layout, build_alias_index
from ..ingest import (
    UpdateManifest,
    UpdateSummary,
    apply_update,
    ingest_bundle,
    link_ctd,
    parse_ctd_table,
    parse_document_bundle,
)
from ..kg_store import KnowledgeGraph
from ..registry import load_registries
from ..report import ReportConfig, load_report_config

log = logging.getLogger(__name__)

UPDATE_LOG = "update_log.jsonl"


class ServiceState:
    def __init__(
        self,
        graph: Optional[KnowledgeGraph] = None,
        corpus: Optional[Corpus] = None,
        report_config: Optional[ReportConfig] = None,
        provider=None,
        data_dir: Optional[Path] = None,
    ):
        self.graph = graph or KnowledgeGraph()
        self.corpus = corpus or Corpus()
        self.report_config = report_config or load_report_config(None)
        self.provider = provider or HashedTfProvider()
        self.data_dir = Path(data_dir) if data_dir else None
        self.write_lock = threading.Lock()
        self.snapshot_graph = self.graph.snapshot()
        self.snapshot_corpus = self.corpus.snapshot()

    # --- construction ---------------------------------------------------------

    @classmethod
    def from_data_dir(cls, data_dir: str | Path) -> "ServiceState":
        data_dir = Path(data_dir)
        registries = load_registries(data_dir / "registry")
        graph = KnowledgeGraph(registries)
        corpus = Corpus()
        templates_path = data_dir / "report_templates.txt"
        report_config = load_report_config(templates_path if templates_path.is_file() else None)
        sidecar = data_dir / "vectors.tsv"
        provider = (
            SidecarVectorProvider.from_file(sidecar, fallback=HashedTfProvider())
            if sidecar.is_file()
            else HashedTfProvider()
        )
        state = cls(
            graph=graph,
            corpus=corpus,
            report_config=report_config,
            provider=provider,
            data_dir=data_dir,
        )

        bundles_dir = data_dir / "bundles"
        if bundles_dir.is_dir():
            for path in sorted(bundles_dir.glob("*.json")):
                bundle = parse_document_bundle(path.read_bytes())
                summary = ingest_bundle(graph, corpus, bundle)
                log.info("ingested %s: %s", path.name, summary)

        ctd_dir = data_dir / "ctd"
        if ctd_dir.is_dir():
            for path in sorted(ctd_dir.glob("*.tsv")):
                rows = parse_ctd_table(path.read_text("utf-8"), registries.relations)
                summary = link_ctd(graph, rows)
                log.info("linked %s: %s", path.name, summary)

        figures_dir = data_dir / "figures"
        if figures_dir.is_dir():
            alias_index = build_alias_index(graph.entities())
            for path in sorted(figures_dir.glob("*.json")):
                layout = json.loads(path.read_text("utf-8"))
                result = analyze_layout(layout, alias_index=alias_index)
                corpus.add_groundings(result.groundings)
                log.info("figure %s: %d groundings", path.name, len(result.groundings))

        log_path = data_dir / UPDATE_LOG
        if log_path.is_file():
            for line in log_path.read_text("utf-8").splitlines():
                if not line.strip():
                    continue
                manifest = UpdateManifest(**json.loads(line))
                apply_update(graph, corpus, manifest, base_dir=data_dir)

        state.publish()
        return state

    # --- writer side ----------------------------------------------------------

    def publish(self) -> None:
        self.snapshot_graph = self.graph.snapshot()
        self.snapshot_corpus = self.corpus.snapshot()

    def apply_manifest(self, manifest: UpdateManifest) -> UpdateSummary:
        with self.write_lock:
            summary = apply_update(self.graph, self.corpus, manifest, base_dir=self.data_dir)
            self.publish()
            if self.data_dir is not None:
                with open(self.data_dir / UPDATE_LOG, "a", encoding="utf-8") as fh:
                    fh.write(json.dumps(manifest.to_dict(), ensure_ascii=False) + "\n")
        return summary

    def apply_ctd_file(self, path: str | Path):
        with self.write_lock:
            rows = parse_ctd_table(
                Path(path).read_text("utf-8"), self.graph.registries.relations
            )
            summary = link_ctd(self.graph, rows)
            self.publish()
        return summary
