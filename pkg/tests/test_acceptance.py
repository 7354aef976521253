"""Acceptance suite: one test per release criterion, at its stated tolerance.

Each test prints a single [ACCEPTANCE] pass line on success (the terminal
summary hook in conftest repeats pass/fail lines for the whole module), and
every expected value is produced by an independent oracle implemented here:
brute-force path search, full-scan cosine ranking, naive pattern matching,
exhaustive nearest-marker distance, and from-scratch graph rebuilds.
"""

import itertools
import json
import random
import re
import time
from fractions import Fraction

import numpy as np
import pytest
from fastapi.testclient import TestClient

from litkg.corpus import Corpus
from litkg.errors import NoPathFound
from litkg.evidence import (
    HashedTfProvider,
    Literal,
    Placeholder,
    embed_context,
    match_meta_query,
    parse_meta_query,
    rank_evidence,
)
from litkg.export import canonical_dump
from litkg.figure_layout import (
    Box,
    TextBox,
    assign_markers,
    detect_markers,
    merge_regions,
    reconstruct_caption,
    split_caption,
)
from litkg.ingest import ingest_bundle, parse_document_bundle
from litkg.kg_store import AssertionEdge, EntityRecord, KnowledgeGraph, ProvenanceRef
from litkg.pathrank import (
    Path,
    PathQuery,
    ScoringMode,
    connection_subgraph,
    enumerate_paths,
    rank_paths,
)
from litkg.report import ReportRequest, generate_report, render_report
from litkg.service import ServiceState, create_app

from conftest import GOLDEN, load_corpus_store


def accept(line: str) -> None:
    print(f"[ACCEPTANCE] {line}")


# --- shared random-graph machinery ---------------------------------------------

SUBTYPE_CHOICES = (
    "decreases^expression",
    "increases^activity",
    "affects^binding",
    "decreases^transport",
    "increases^abundance",
    "therapeutic",
    "marker/mechanism",
)
ACTION_CHOICES = ("Increase", "Decrease", "Affect")


def random_kg(rng: random.Random, max_nodes=15, max_edges=40) -> tuple[int, KnowledgeGraph]:
    n = rng.randint(4, max_nodes)
    g = KnowledgeGraph()
    for i in range(n):
        g.upsert_entity(EntityRecord(id=f"LOCAL:n{i}", name=f"n{i}", coarse_type="Gene"))
    for _ in range(rng.randint(3, max_edges)):
        i, j = rng.sample(range(n), 2)
        category = "GeneChemical"
        subtype = rng.choice(SUBTYPE_CHOICES)
        if subtype in ("therapeutic", "marker/mechanism"):
            category = "ChemicalDisease"
        g.add_assertion(
            AssertionEdge(
                src=f"LOCAL:n{i}",
                dst=f"LOCAL:n{j}",
                category=category,
                subtype=subtype,
                action=rng.choice(ACTION_CHOICES),
                provenance={
                    ProvenanceRef(f"p{rng.randint(1, 6)}", 0)
                    for _ in range(rng.randint(1, 3))
                },
            )
        )
    return n, g


def oracle_paths(graph: KnowledgeGraph, src: str, dst: str, max_hops: int) -> set:
    """Brute-force recursive enumeration over the raw edge list."""
    edge_list = [e.key for e in graph.edges()]
    found = set()

    def recurse(nodes, edges):
        if len(edges) >= max_hops:
            return
        current = nodes[-1]
        for key in edge_list:
            a, b = key[0], key[1]
            if a == current:
                nxt = b
            elif b == current:
                nxt = a
            else:
                continue
            if nxt in nodes:
                continue
            if nxt == dst:
                found.add((nodes + (nxt,), edges + (key,)))
            else:
                recurse(nodes + (nxt,), edges + (key,))

    recurse((src,), ())
    return found


def test_c1_path_oracle_equivalence():
    """200 random graphs, hops 2-4: enumerate_paths == brute force, < 30 s."""
    rng = random.Random(101)
    started = time.monotonic()
    graphs = 0
    for trial in range(200):
        n, g = random_kg(rng)
        src = f"LOCAL:n{rng.randrange(n)}"
        dst = src
        while dst == src:
            dst = f"LOCAL:n{rng.randrange(n)}"
        for hops in (2, 3, 4):
            got = enumerate_paths(g, PathQuery(src=src, dst=dst, max_hops=hops))
            assert not got.truncated
            assert {(p.nodes, p.edges) for p in got.paths} == oracle_paths(g, src, dst, hops)
        graphs += 1
    elapsed = time.monotonic() - started
    assert elapsed < 30.0, f"path oracle sweep took {elapsed:.1f}s"
    accept(f"C1 PASS path oracle equivalence on {graphs} graphs in {elapsed:.1f}s")


def test_c2_ranking_determinism_and_tie_law():
    """100 random path sets: rank == oracle stable sort; byte-identical reruns."""
    rng = random.Random(202)
    for _ in range(100):
        paths = []
        seen_nodes = set()
        for _ in range(rng.randint(5, 60)):
            length = rng.randint(1, 4)
            nodes = tuple(f"LOCAL:n{rng.randint(0, 11)}" for _ in range(length + 1))
            if nodes in seen_nodes:
                continue
            seen_nodes.add(nodes)
            edges = tuple(
                (nodes[k], nodes[k + 1], "GeneChemical", "affects^binding", "Affect")
                for k in range(length)
            )
            score = Fraction(rng.randint(0, 8), rng.randint(1, 4))
            paths.append(Path(nodes=nodes, edges=edges, score=score))
        expected = sorted(paths, key=lambda p: (-p.score, len(p.nodes), p.nodes))
        got = rank_paths(list(paths), len(paths))
        assert [(p.nodes, p.score) for p in got] == [(p.nodes, p.score) for p in expected]

        def serialize(ranked):
            return json.dumps(
                [[list(p.nodes), [list(e) for e in p.edges], str(p.score)] for p in ranked]
            ).encode()

        assert serialize(got) == serialize(rank_paths(list(paths), len(paths)))
    accept("C2 PASS ranking matches oracle sort and reruns byte-identically")


def test_c3_salience_consistency():
    """50 subgraph queries: sum of edge saliences == sum of score*len, exactly."""
    rng = random.Random(303)
    checked = 0
    while checked < 50:
        n, g = random_kg(rng, max_nodes=10, max_edges=18)
        src = f"LOCAL:n{rng.randrange(n)}"
        dst = src
        while dst == src:
            dst = f"LOCAL:n{rng.randrange(n)}"
        mode = rng.choice(list(ScoringMode))
        try:
            sub = connection_subgraph(
                g, PathQuery(src=src, dst=dst, max_hops=3, top_k=rng.randint(1, 25), mode=mode)
            )
        except NoPathFound:
            continue
        lhs = sum(sub.edge_salience.values(), Fraction(0))
        rhs = sum((p.score * len(p.edges) for p in sub.paths), Fraction(0))
        assert lhs == rhs  # exact rational arithmetic
        checked += 1
    accept(f"C3 PASS salience consistency exact on {checked} queries")


# --- incremental update inverse -----------------------------------------------

ENTITY_POOL = [
    ("MESH:D100001", "chemalpha", "Chemical"),
    ("MESH:D100002", "chembeta", "Chemical"),
    ("MESH:D100003", "chemgamma", "Chemical"),
    ("GENE:200001", "genealpha", "Gene"),
    ("GENE:200002", "genebeta", "Gene"),
    ("GENE:200003", "genegamma", "Gene"),
    ("MESH:D200001", "disalpha", "Disease"),
    ("MESH:D200002", "disbeta", "Disease"),
    ("TAX:9606", "orghuman", "Organism"),
]

EVENT_TYPES = ("Binding", "Phosphorylation", "Regulation")


def synth_bundle(rng: random.Random, paper_id: str, version: int) -> dict:
    chosen = rng.sample(ENTITY_POOL, rng.randint(2, 5))
    sentences = []
    mentions = []
    for idx, (eid, name, coarse) in enumerate(chosen):
        text = f"study v{version} observes {name} closely in context {rng.randint(0, 9)}"
        sentences.append({"idx": idx, "section": "Body" if idx else "Title", "text": text})
        start = text.find(name)
        mentions.append(
            {
                "sentence_idx": idx,
                "char_span": [start, start + len(name)],
                "entity": {"id": eid, "name": name, "coarse_type": coarse},
            }
        )
    relations = []
    for _ in range(rng.randint(0, 3)):
        a, b = rng.sample(chosen, 2) if len(chosen) >= 2 else (chosen[0], chosen[0])
        if a[0] == b[0]:
            continue
        subtype = rng.choice(SUBTYPE_CHOICES)
        category = (
            "ChemicalDisease" if subtype in ("therapeutic", "marker/mechanism") else "GeneChemical"
        )
        relations.append(
            {
                "sentence_idx": rng.randrange(len(sentences)),
                "src": a[0],
                "dst": b[0],
                "category": category,
                "subtype": subtype,
                "action": rng.choice(ACTION_CHOICES),
            }
        )
    events = []
    if rng.random() < 0.4:
        roles = {"Theme": chosen[0][0]}
        if len(chosen) > 1:
            roles["Cause"] = chosen[1][0]
        events.append(
            {
                "sentence_idx": 0,
                "event_type": rng.choice(EVENT_TYPES),
                "trigger": "observes",
                "roles": roles,
            }
        )
    return {
        "paper_id": paper_id,
        "title": f"synthetic paper {paper_id} v{version}",
        "authors": [f"author-{paper_id}"],
        "affiliations": [f"lab-{rng.randint(0, 3)}"],
        "acknowledgements": "",
        "pub_date": "2020-01-01",
        "peer_reviewed": True,
        "sentences": sentences,
        "mentions": mentions,
        "relations": relations,
        "events": events,
    }


def test_c4_incremental_update_inverse():
    """100 random ingest/remove/update sequences == from-scratch rebuild, bytewise."""
    rng = random.Random(404)
    for _ in range(100):
        graph, corpus = KnowledgeGraph(), Corpus()
        pool = [f"paper-{i}" for i in range(6)]
        active: dict[str, tuple[int, dict]] = {}
        versions = {p: 0 for p in pool}
        order: list[str] = []

        def ingest_version(paper_id):
            versions[paper_id] += 1
            doc = synth_bundle(rng, paper_id, versions[paper_id])
            bundle = parse_document_bundle(json.dumps(doc).encode())
            ingest_bundle(graph, corpus, bundle)
            active[paper_id] = (versions[paper_id], doc)
            if paper_id in order:
                order.remove(paper_id)
            order.append(paper_id)

        for _ in range(rng.randint(4, 12)):
            op = rng.choice(("add", "add", "remove", "update"))
            if op == "add":
                candidates = [p for p in pool if p not in active]
                if not candidates:
                    op = "update"
                else:
                    ingest_version(rng.choice(candidates))
                    continue
            if op == "remove":
                paper_id = rng.choice(pool)
                graph.remove_paper(paper_id, corpus)
                active.pop(paper_id, None)
                if paper_id in order:
                    order.remove(paper_id)
                continue
            if op == "update":
                if not active:
                    continue
                paper_id = rng.choice(sorted(active))
                graph.remove_paper(paper_id, corpus)  # update = remove then ingest
                ingest_version(paper_id)

        rebuilt_graph, rebuilt_corpus = KnowledgeGraph(), Corpus()
        for paper_id in order:
            _, doc = active[paper_id]
            ingest_bundle(
                rebuilt_graph, rebuilt_corpus, parse_document_bundle(json.dumps(doc).encode())
            )
        assert canonical_dump(graph, corpus) == canonical_dump(rebuilt_graph, rebuilt_corpus)
    accept("C4 PASS incremental updates equal from-scratch rebuilds on 100 sequences")


# --- evidence ranking --------------------------------------------------------

VOCAB = (
    "viral protein receptor binding entry replication cytokine interleukin plasma fever "
    "cough therapy dosage response antibody serum titer infection lung tissue cell culture "
    "assay inhibitor kinase expression pathway clinical cohort outcome mortality recovery "
    "marker enzyme substrate membrane fusion spike antigen mutation variant"
).split()


def build_evidence_corpus(rng: random.Random) -> tuple[Corpus, list[str]]:
    from litkg.corpus import PaperMeta, SentenceRecord

    corpus = Corpus()
    singles = []
    total = 0
    paper_n = 0
    while total < 195:
        paper_id = f"ev-{paper_n:03d}"
        records = []
        for idx in range(5):
            text = " ".join(rng.choice(VOCAB) for _ in range(rng.randint(4, 9)))
            records.append(
                SentenceRecord(paper_id=paper_id, sentence_idx=idx, section="Body", text=text)
            )
        corpus.add_paper(
            PaperMeta(paper_id, f"t{paper_n}", (), (), "", "2020-01-01", True), records
        )
        total += 5
        paper_n += 1
    for k in range(5):
        paper_id = f"solo-{k}"
        text = f"unique sentinel sentence number {k} about " + " ".join(
            rng.choice(VOCAB) for _ in range(4)
        )
        singles.append(text)
        corpus.add_paper(
            PaperMeta(paper_id, text, (), (), "", "2020-01-01", True),
            [SentenceRecord(paper_id=paper_id, sentence_idx=0, section="Body", text=text)],
        )
        total += 1
    assert total == 200
    return corpus, singles


def oracle_evidence_ranking(provider, corpus, query):
    qv = provider.embed(query)
    rows = []
    for sent in corpus.iter_sentences():
        n = corpus.sentence_count(sent.paper_id)
        parts = []
        if sent.sentence_idx > 0:
            parts.append((0.25, corpus.sentence(sent.paper_id, sent.sentence_idx - 1).text))
        parts.append((0.5, sent.text))
        if sent.sentence_idx < n - 1:
            parts.append((0.25, corpus.sentence(sent.paper_id, sent.sentence_idx + 1).text))
        total = sum(w for w, _ in parts)
        v = np.zeros(provider.dim)
        for w, t in parts:
            v = v + (w / total) * provider.embed(t)
        v = v / np.linalg.norm(v)
        rows.append((float(np.dot(v, qv)), sent.paper_id, sent.sentence_idx))
    rows.sort(key=lambda r: (-r[0], r[1], r[2]))
    return rows


def test_c5_evidence_ranking_oracle():
    """200-sentence corpus, 25 queries: full ranking equality plus unit norms."""
    rng = random.Random(505)
    provider = HashedTfProvider()
    corpus, singles = build_evidence_corpus(rng)

    for sent in corpus.iter_sentences():
        norm = float(
            np.linalg.norm(embed_context(provider, corpus, sent.paper_id, sent.sentence_idx))
        )
        assert abs(norm - 1.0) <= 1e-6

    queries = [" ".join(rng.choice(VOCAB) for _ in range(rng.randint(2, 4))) for _ in range(20)]
    queries += singles
    assert len(queries) == 25
    for query in queries:
        got = rank_evidence(provider, corpus, query, top_n=200)
        expected = oracle_evidence_ranking(provider, corpus, query)
        assert [(h.sentence.paper_id, h.sentence.sentence_idx) for h in got] == [
            (pid, idx) for _, pid, idx in expected
        ]
        for hit, (sim, _, _) in zip(got, expected):
            assert hit.similarity == pytest.approx(sim, abs=1e-9)

    for text in singles:
        top = rank_evidence(provider, corpus, text, top_n=1)[0]
        assert top.similarity == pytest.approx(1.0, abs=1e-6)
        assert top.sentence.text == text
    accept("C5 PASS evidence ranking equals brute-force cosine on 25 queries")


# --- meta queries ---------------------------------------------------------------

META_PATTERNS = (
    "CHEMICAL decreases GENE",
    "CHEMICAL CHEMICAL",
    "GENE GENE",
    "GENE GENE binding",
    "DISEASE",
    "CELL_LINE",
    "CHEMICAL approved DISEASE",
    "PROTEIN expression",
    "ORGANISM assay",
    "CHEMICAL CELL_LINE",
    "losartan",
    "CHEMICAL decreases",
    "tumor GENE",
    "DISEASE DISEASE",
    "increases GENE",
    "CHEMICAL inhibits GENE",
    "malaria",
    "CELL_LINE cultures",
    "GENE phosphorylation",
    "CHEMICAL treat DISEASE",
)


def oracle_meta_scan(corpus, mq, top_n):
    results = []
    for sent in corpus.iter_sentences():
        literals = [t for t in mq.tokens if isinstance(t, Literal)]
        placeholders = [t for t in mq.tokens if isinstance(t, Placeholder)]
        spans = []
        ok = True
        for lit in literals:
            found = None
            for m in re.finditer(r"[A-Za-z0-9]+", sent.text):
                if m.group().lower() == lit.text:
                    found = (m.start(), m.end())
                    break
            if found is None:
                ok = False
                break
            spans.append(found)
        if not ok:
            continue
        best = None
        if placeholders:
            for perm in itertools.permutations(range(len(sent.mentions)), len(placeholders)):
                good = True
                for ph, mi in zip(placeholders, perm):
                    mention = sent.mentions[mi]
                    if ph.scope == "coarse":
                        if mention.coarse_type != ph.label:
                            good = False
                            break
                    elif ph.label not in {
                        re.sub(r"[\s/-]+", "_", f).upper() for f in mention.fine_types
                    }:
                        good = False
                        break
                if not good:
                    continue
                all_spans = spans + [sent.mentions[mi].char_span for mi in perm]
                width = max(e for _, e in all_spans) - min(s for s, _ in all_spans)
                best = width if best is None else min(best, width)
            if best is None:
                continue
        else:
            best = (max(e for _, e in spans) - min(s for s, _ in spans)) if spans else 0
        results.append((len(mq.tokens), best, sent.paper_id, sent.sentence_idx))
    results.sort(key=lambda r: (-r[0], r[1], r[2], r[3]))
    return results[:top_n]


def test_c6_meta_query_oracle():
    """20 patterns on the fixture corpus match a naive per-sentence scan."""
    graph, corpus = load_corpus_store()
    non_empty = 0
    for pattern in META_PATTERNS:
        mq = parse_meta_query(pattern, fine_types=graph.registries.fine_types)
        got = [
            (m.matched_tokens, m.span, m.sentence.paper_id, m.sentence.sentence_idx)
            for m in match_meta_query(corpus, mq, top_n=25)
        ]
        assert got == oracle_meta_scan(corpus, mq, 25), pattern
        non_empty += bool(got)
    assert non_empty >= 10  # the sweep is not vacuous
    accept(f"C6 PASS meta-query oracle equality on {len(META_PATTERNS)} patterns")


# --- figure layout -----------------------------------------------------------

MARKER_FORMS = ("{}", "({})", "{})", "{}.")


def synth_layout(rng: random.Random):
    letters = [chr(ord("A") + i) for i in range(rng.randint(2, 4))]
    markers = []
    for i, letter in enumerate(letters):
        x = 40 + 320 * (i % 3) + rng.uniform(0, 60)
        y = 40 + 320 * (i // 3) + rng.uniform(0, 60)
        form = rng.choice(MARKER_FORMS).format(letter if rng.random() < 0.5 else letter.lower())
        markers.append(TextBox(box=Box(x, y, x + 14, y + 12), text=form))
    regions = []
    cells = rng.sample(range(9), rng.randint(len(letters), 7))
    for cell in cells:
        cx, cy = 320 * (cell % 3), 320 * (cell // 3)
        x0 = cx + rng.uniform(4, 40)
        y0 = cy + rng.uniform(4, 40)
        regions.append(Box(x0, y0, x0 + rng.uniform(60, 240), y0 + rng.uniform(60, 240)))
    labels = [TextBox(box=Box(10, 950, 90, 970), text="scale bar 50 um")]
    caption_parts = []
    if rng.random() < 0.5:
        caption_parts.append("Synthetic overview figure.")
    for letter in letters:
        caption_parts.append(f"({letter})")
        caption_parts.append(f"panel {letter.lower()} content detail.")
    return markers, labels, regions, letters, " ".join(caption_parts)


def test_c7_figure_layout_oracles():
    """30 synthetic layouts: assignment == exhaustive distance oracle; captions
    reconstruct; hulls are minimal."""
    rng = random.Random(707)
    for _ in range(30):
        marker_boxes, label_boxes, regions, letters, caption = synth_layout(rng)
        markers, labels = detect_markers(marker_boxes + label_boxes)
        assert [m.letter for m in markers] == letters
        assert len(labels) == len(label_boxes)

        assignment = assign_markers(markers, regions)
        for idx, region in enumerate(regions):
            best = min(
                (m.box.box.edge_distance(region), m.letter) for m in markers
            )
            assert idx in assignment[best[1]], "region not assigned to its nearest marker"

        records = merge_regions(assignment, regions)
        assert sum(len(r.regions) for r in records) == len(regions)
        for record in records:
            assert record.bbox.x0 == min(r.x0 for r in record.regions)
            assert record.bbox.y0 == min(r.y0 for r in record.regions)
            assert record.bbox.x1 == max(r.x1 for r in record.regions)
            assert record.bbox.y1 == max(r.y1 for r in record.regions)

        split = split_caption(caption)
        assert reconstruct_caption(split) == " ".join(caption.split())
        assert [letter for letter, _, _ in split.fragments] == letters
    accept("C7 PASS figure layout matches distance oracle on 30 layouts")


# --- reports -----------------------------------------------------------

REPORT_CASES = {
    "losartan": ReportRequest(
        drug="MESH:D008784", targets=("MESH:D008175", "LOCAL:cathepsin-l-pseudogene-2")
    ),
    "benazepril": ReportRequest(drug="MESH:C044946", targets=("GENE:7157",)),
    "amodiaquine": ReportRequest(drug="MESH:D000655", targets=("MESH:D008288",)),
}


def test_c8_report_totality_and_golden():
    """Three drugs, eleven sections each; Losartan reproduces the p53 chain;
    structured bytes match the checked-in goldens."""
    graph, corpus = load_corpus_store()
    for name, req in REPORT_CASES.items():
        report = generate_report(graph, corpus, req, generated="2026-08-08T00:00:00Z")
        assert [a.number for a in report.answers] == list(range(1, 12))
        rendered = render_report(report, "structured")
        assert rendered == (GOLDEN / f"{name}.report.json").read_bytes(), name
        if name == "losartan":
            sub = report.subgraphs["MESH:D008175"]
            chains = {tuple(p["nodes"]) for p in sub["paths"]}
            assert ("MESH:D008784", "GENE:7157", "MESH:D008175") in chains
    accept("C8 PASS reports total and byte-identical to goldens for 3 drugs")


# --- service contract --------------------------------------------------------


def test_c9_service_contract():
    """GET /stats equals stats(); facet anti-monotonicity over 50 random
    constraint additions; error codes round-trip through the envelope."""
    graph, corpus = load_corpus_store(with_ctd=True)
    state = ServiceState(graph=graph, corpus=corpus)
    client = TestClient(create_app(state))

    expected_stats = (
        json.dumps(
            state.snapshot_graph.stats(state.snapshot_corpus).to_dict(),
            ensure_ascii=False,
            separators=(",", ":"),
        )
        + "\n"
    )
    assert client.get("/stats").text == expected_stats

    kinds = (
        "EntityName",
        "CoarseType",
        "FineType",
        "RelationSubtype",
        "EventType",
        "Action",
        "PaperId",
    )
    values = {
        "EntityName": ["Losartan", "TNF", "EIF2AK2", "hypertension", "Amodiaquine"],
        "CoarseType": ["Chemical", "Gene", "Disease", "Organism"],
        "FineType": ["GENE_OR_GENOME", "CELL_LINE", "PHARMACOLOGIC_SUBSTANCE"],
        "RelationSubtype": ["therapeutic", "marker/mechanism", "decreases^expression"],
        "EventType": ["Binding", "Phosphorylation"],
        "Action": ["Increase", "Decrease", "Affect"],
        "PaperId": ["p-losartan-2020", "p-eif2ak2-2020", "CTD"],
    }

    def all_counts(constraints):
        out = {}
        for kind in kinds:
            params = [("kind", kind)] + [("c", c) for c in constraints]
            body = client.get("/facets", params=params).json()
            out[kind] = {e["term"]: e["count"] for e in body["entries"]}
        return out

    rng = random.Random(909)
    additions = 0
    while additions < 50:
        constraints: list[str] = []
        baseline = all_counts(constraints)
        for _ in range(rng.randint(1, 3)):
            facet = rng.choice(list(values))
            constraints.append(f"{facet}:{rng.choice(values[facet])}")
            tightened = all_counts(constraints)
            for kind in kinds:
                for term, count in tightened[kind].items():
                    assert count <= baseline[kind].get(term, 0), (kind, term, constraints)
            baseline = tightened
            additions += 1

    # error envelope round trips: every emitted code is a stable module error name
    cases = [
        ("get", "/paths", {"src": "MESH:D008784", "dst": "MESH:D999999"}, None, 404, "UnknownEntity"),
        ("get", "/subgraph", {"src": "MESH:D008784", "dst": "MESH:D009765"}, None, 404, "NoPathFound"),
        ("get", "/paths", {"src": "MESH:D008784", "dst": "GENE:7157", "mode": "Nope"}, None, 422, "InvalidQuery"),
        ("get", "/paths", {"src": "MESH:D008784", "dst": "GENE:7157", "hops": 9}, None, 422, "InvalidQuery"),
        ("post", "/evidence", None, {"query": " "}, 422, "EmptyQuery"),
        ("post", "/evidence", None, {"query": "x", "candidates": [["p-losartan-2020", 99]]}, 404, "UnknownSentence"),
        ("post", "/metaquery", None, {"pattern": "XYZQW binds GENE"}, 422, "UnknownPlaceholder"),
        ("get", "/facets", {"kind": "Nope"}, None, 422, "UnknownFacet"),
        ("get", "/export", {"format": "yaml"}, None, 422, "UnknownFormat"),
        ("get", "/report/MESH:D999999", {"targets": "GENE:7157"}, None, 404, "UnknownEntity"),
        ("get", "/heatmap", {"row": "Gene", "col": "Protein"}, None, 422, "UnknownFacet"),
    ]
    for method, url, params, body, status, code in cases:
        if method == "get":
            response = client.get(url, params=params)
        else:
            response = client.post(url, params=params, json=body)
        assert response.status_code == status, (url, response.status_code)
        envelope = response.json()
        assert envelope["error"]["code"] == code, (url, envelope)
        assert envelope["error"]["message"]

    # overlap + per-paper error codes surface through the update summary
    import shutil
    import tempfile
    from pathlib import Path as _Path

    with tempfile.TemporaryDirectory() as tmp:
        bundle = _Path(tmp) / "doc_p53.json"
        shutil.copy(_Path(__file__).parent / "fixtures" / "doc_p53.json", bundle)
        response = client.post(
            "/admin/update",
            json={"added": [str(bundle)], "removed": ["p-p53-lung-2019"], "updated": []},
        )
        assert response.status_code == 422
        assert response.json()["error"]["code"] == "OverlappingLists"

        altered = json.loads(bundle.read_text("utf-8"))
        altered["title"] = "same paper id, different bytes"
        conflicting = _Path(tmp) / "doc_p53_altered.json"
        conflicting.write_text(json.dumps(altered), encoding="utf-8")
        response = client.post(
            "/admin/update", json={"added": [str(conflicting)], "removed": [], "updated": []}
        )
        body = response.json()
        assert body["errors"][0]["code"] == "DuplicatePaper"
    accept("C9 PASS service contract: stats bytes, anti-monotone facets, envelopes")
