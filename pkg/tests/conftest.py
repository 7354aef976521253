"""Shared fixtures: the checked-in paper bundles and a loaded graph/corpus."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from litkg.corpus import Corpus
from litkg.ingest import ingest_bundle, link_ctd, parse_ctd_table, parse_document_bundle
from litkg.kg_store import KnowledgeGraph

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"

BUNDLE_FILES = [
    "doc_losartan.json",
    "doc_p53.json",
    "doc_cathepsin.json",
    "doc_benazepril.json",
    "doc_amodiaquine.json",
    "doc_eif2ak2.json",
]


def fixture_path(name: str) -> Path:
    return FIXTURES / name


def read_bundle(name: str):
    return parse_document_bundle(fixture_path(name).read_bytes())


def load_corpus_store(bundle_names=None, with_ctd: bool = False):
    """Fresh graph+corpus built from the checked-in bundles."""
    graph = KnowledgeGraph()
    corpus = Corpus()
    for name in bundle_names or BUNDLE_FILES:
        ingest_bundle(graph, corpus, read_bundle(name))
    if with_ctd:
        rows = parse_ctd_table(
            fixture_path("ctd_sample.tsv").read_text("utf-8"), graph.registries.relations
        )
        link_ctd(graph, rows)
    return graph, corpus


@pytest.fixture
def store():
    return load_corpus_store()


@pytest.fixture
def store_with_ctd():
    return load_corpus_store(with_ctd=True)


@pytest.fixture
def empty_store():
    return KnowledgeGraph(), Corpus()


@pytest.fixture
def losartan_bundle():
    return read_bundle("doc_losartan.json")


@pytest.fixture
def fig_layout():
    return json.loads(fixture_path("fig_losartan.json").read_text("utf-8"))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion, independent of capture."""
    lines = []
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py::" in nodeid:
                name = nodeid.split("::")[-1]
                lines.append((name, "PASS" if status == "passed" else "FAIL"))
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, verdict in sorted(lines):
            terminalreporter.write_line(f"{verdict} {name}")
