"""Eleven-section drug repurposing reports with evidence pointers.

Every report answers the same eleven questions for one candidate drug
against a set of target entities. Answers are routed per question: curated
edge lookups (indication, toxicity), figure groundings, connection
subgraphs per target, meta-query retrieval (screening, in vitro, animal,
trials), paper metadata (affiliations, funding, sources). A question with
no data still appears, carrying a not-found item that names the failed
query, so a report always has exactly eleven sections.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

from .corpus import Corpus
from .errors import ConfigError, UnknownEntity, UnknownFormat
from .evidence import match_meta_query, parse_meta_query
from .kg_store import KnowledgeGraph, ProvenanceRef
from .pathrank import PathQuery, ScoringMode, connection_subgraph
from .errors import NoPathFound

QUESTION_TEXTS = (
    "Current indication: what is the drug class? What is it currently approved to treat?",
    "Molecular structure (symbols desired, but a pointer to a reference is also useful)",
    "Mechanism of action i.e., inhibits viral entry, replication, etc. (w/ a pointer to data)",
    "Was the drug identified by manual or computation screen?",
    "Who is studying the drug? (Source/lab name)",
    "In vitro Data available (cell line used, assays run, viral strain used, cytopathic "
    "effects, toxicity, LD50, dosage response curve, etc.)",
    "Animal Data Available (what animal model, LD50, dosage response curve, etc.)",
    "Clinical trials on going (what phase, facility, target population, dosing, "
    "intervention etc.)",
    "Funding source",
    "Has the drug shown evidence of systemic toxicity?",
    "List of relevant sources to pull data from.",
)

FUNDING_LEXICON = ("grant", "funded", "funding", "supported by", "award")

ITEM_KINDS = ("KgFact", "EvidenceSentence", "MetadataFact", "SubgraphRef", "NotFound")

META_QUESTION_NUMBERS = (4, 6, 7, 8)


# --- configuration -----------------------------------------------------------

_SECTION_RE = re.compile(r"^\[q([0-9]+)\]$")
_QUERY_RE = re.compile(r'^query\s*=\s*"(.*)"$')
_SUBTYPES_RE = re.compile(r"^subtypes\s*=\s*(.+)$")


@dataclass
class ReportConfig:
    therapeutic: frozenset[str] = frozenset()
    toxicity: frozenset[str] = frozenset()
    queries: dict[int, tuple[str, ...]] = field(default_factory=dict)


def parse_report_templates(text: str) -> ReportConfig:
    """Parse the [qN] / query / subtypes template grammar."""
    queries: dict[int, list[str]] = {}
    subtypes: dict[int, list[str]] = {}
    current: Optional[int] = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _SECTION_RE.match(line)
        if m:
            current = int(m.group(1))
            if not 1 <= current <= 11:
                raise ConfigError(f"line {lineno}: section [q{current}] out of range 1..11")
            continue
        if current is None:
            raise ConfigError(f"line {lineno}: statement outside a [qN] section")
        m = _QUERY_RE.match(line)
        if m:
            queries.setdefault(current, []).append(m.group(1))
            continue
        m = _SUBTYPES_RE.match(line)
        if m:
            names = [n.strip() for n in m.group(1).split(",") if n.strip()]
            subtypes.setdefault(current, []).extend(names)
            continue
        raise ConfigError(f"line {lineno}: unrecognized statement {line!r}")
    return ReportConfig(
        therapeutic=frozenset(subtypes.get(1, [])),
        toxicity=frozenset(subtypes.get(10, [])),
        queries={n: tuple(qs) for n, qs in queries.items()},
    )


def default_report_config() -> ReportConfig:
    text = resources.files("litkg.data").joinpath("report_templates.txt").read_text("utf-8")
    return parse_report_templates(text)


def load_report_config(path: str | Path | None) -> ReportConfig:
    if path is None:
        return default_report_config()
    return parse_report_templates(Path(path).read_text(encoding="utf-8"))


# --- report data model ------------------------------------------------------------


@dataclass(frozen=True)
class ReportRequest:
    drug: str
    targets: tuple[str, ...]
    max_hops: int = 3
    top_k: int = 20
    mode: ScoringMode = ScoringMode.AVG
    evidence_per_answer: int = 5

    def to_dict(self) -> dict:
        return {
            "drug": self.drug,
            "targets": list(self.targets),
            "max_hops": self.max_hops,
            "top_k": self.top_k,
            "mode": self.mode.value,
            "evidence_per_answer": self.evidence_per_answer,
        }


@dataclass
class AnswerItem:
    text: str
    kind: str
    evidence: list[ProvenanceRef] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "text": self.text,
            "kind": self.kind,
            "evidence": [_ref_dict(r) for r in self.evidence],
        }


@dataclass
class QuestionAnswer:
    number: int
    question: str
    items: list[AnswerItem]
    evidence: list[ProvenanceRef]

    def to_dict(self) -> dict:
        return {
            "number": self.number,
            "question": self.question,
            "items": [i.to_dict() for i in self.items],
            "evidence": [_ref_dict(r) for r in self.evidence],
        }


@dataclass
class DrugReport:
    request: ReportRequest
    generated: str
    answers: list[QuestionAnswer]
    subgraphs: dict[str, Optional[dict]]

    def to_dict(self) -> dict:
        return {
            "request": self.request.to_dict(),
            "generated": self.generated,
            "answers": [a.to_dict() for a in self.answers],
            "subgraphs": {t: self.subgraphs[t] for t in sorted(self.subgraphs)},
        }


def _ref_dict(ref: ProvenanceRef) -> dict:
    return {
        "paper_id": ref.paper_id,
        "sentence_idx": ref.sentence_idx,
        "char_span": list(ref.char_span) if ref.char_span else None,
    }


def _subgraph_dict(sub) -> dict:
    return {
        "src": sub.src,
        "dst": sub.dst,
        "truncated": sub.truncated,
        "nodes": list(sub.node_ids),
        "paths": [
            {
                "nodes": list(p.nodes),
                "edges": [list(k) for k in p.edges],
                "score": str(p.score),
                "score_value": float(p.score),
            }
            for p in sub.paths
        ],
        "edges": [
            {
                "key": list(key),
                "salience": str(sub.edge_salience[key]),
                "salience_value": float(sub.edge_salience[key]),
                "evidence": [_ref_dict(r) for r in sub.evidence[key]],
            }
            for key in sorted(sub.edge_salience)
        ],
    }


# --- answer builders --------------------------------------------------------------


def _not_found(query: str) -> AnswerItem:
    return AnswerItem(text=f"not found: {query}", kind="NotFound")


def _dedupe_refs(refs) -> list[ProvenanceRef]:
    return sorted(set(refs), key=lambda r: r.sort_key())


def _subtype_edge_items(
    graph: KnowledgeGraph,
    drug: str,
    subtype_set: frozenset[str],
    cap: int,
    query_desc: str,
) -> tuple[list[AnswerItem], list[ProvenanceRef]]:
    items: list[AnswerItem] = []
    refs: list[ProvenanceRef] = []
    for key, _neighbor in graph.neighbors(drug, category="ChemicalDisease"):
        edge = graph.edge(key)
        if edge.subtype not in subtype_set:
            continue
        src, dst = graph.entity(edge.src), graph.entity(edge.dst)
        evidence = _dedupe_refs(edge.provenance)[:cap]
        items.append(
            AnswerItem(
                text=f"{src.name} {edge.subtype} {dst.name} ({edge.action})",
                kind="KgFact",
                evidence=evidence,
            )
        )
        refs.extend(evidence)
    if not items:
        items.append(_not_found(query_desc))
    return items, _dedupe_refs(refs)


def _meta_query_items(
    graph: KnowledgeGraph,
    corpus: Corpus,
    drug: str,
    templates: tuple[str, ...],
    cap: int,
) -> tuple[list[AnswerItem], list[ProvenanceRef]]:
    drug_rec = graph.entity(drug)
    seen: set[tuple[str, int]] = set()
    collected = []
    for template in templates:
        for alias in sorted(drug_rec.aliases):
            mq = parse_meta_query(
                template.replace("DRUGNAME", alias), fine_types=graph.registries.fine_types
            )
            for match in match_meta_query(corpus, mq, top_n=cap):
                key = (match.sentence.paper_id, match.sentence.sentence_idx)
                if key not in seen:
                    seen.add(key)
                    collected.append(match)
    collected.sort(
        key=lambda m: (-m.matched_tokens, m.span, m.sentence.paper_id, m.sentence.sentence_idx)
    )
    items = []
    refs = []
    for match in collected[:cap]:
        ref = ProvenanceRef(match.sentence.paper_id, match.sentence.sentence_idx)
        items.append(AnswerItem(text=match.sentence.text, kind="EvidenceSentence", evidence=[ref]))
        refs.append(ref)
    if not items:
        items.append(_not_found(" | ".join(templates) if templates else "no templates configured"))
    return items, _dedupe_refs(refs)


def answer_metadata_question(
    corpus: Corpus,
    drug: str,
    which: str,
    graph: Optional[KnowledgeGraph] = None,
    fact_refs: Optional[list[ProvenanceRef]] = None,
) -> QuestionAnswer:
    """Metadata-backed answers: Affiliations (question 5) or Sources (question 11)."""
    if which not in ("Affiliations", "Sources"):
        raise UnknownFormat(f"unknown metadata question {which!r}")
    if graph is not None and not graph.has_entity(drug):
        raise UnknownEntity(f"unknown entity {drug!r}")
    number = 5 if which == "Affiliations" else 11
    question = QUESTION_TEXTS[number - 1]
    papers = corpus.papers_mentioning(drug)

    if which == "Affiliations":
        by_affiliation: dict[str, list[str]] = {}
        for paper_id in papers:
            meta = corpus.paper(paper_id)
            for affiliation in meta.affiliations:
                by_affiliation.setdefault(affiliation, []).append(paper_id)
        items = []
        refs: list[ProvenanceRef] = []
        for affiliation in sorted(by_affiliation):
            evidence = [ProvenanceRef(pid, 0) for pid in sorted(set(by_affiliation[affiliation]))]
            items.append(AnswerItem(text=affiliation, kind="MetadataFact", evidence=evidence))
            refs.extend(evidence)
        if not items:
            items.append(_not_found(f"affiliations of papers mentioning {drug}"))
        return QuestionAnswer(number, question, items, _dedupe_refs(refs))

    # Sources: rank papers by how much provenance they contribute. Curated
    # synthetic sources (CTD) are not papers and stay out of this list.
    counts: dict[str, int] = {}
    if fact_refs is not None:
        for ref in fact_refs:
            counts[ref.paper_id] = counts.get(ref.paper_id, 0) + 1
    elif graph is not None:
        for key in graph.incident(drug):
            for ref in graph.edge(key).provenance:
                counts[ref.paper_id] = counts.get(ref.paper_id, 0) + 1
        for ekey in graph.event_refs(drug):
            for ref in graph.event(ekey).provenance:
                counts[ref.paper_id] = counts.get(ref.paper_id, 0) + 1
    else:
        for paper_id in papers:
            counts[paper_id] = sum(
                1
                for s in corpus.sentences_of(paper_id)
                for m in s.mentions
                if m.entity_id == drug
            )
    for synthetic in corpus.synthetic_sources:
        counts.pop(synthetic, None)
    items = []
    refs = []
    for paper_id, count in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0])):
        meta = corpus.paper(paper_id)
        title = meta.title if meta else "(paper not in corpus)"
        ref = ProvenanceRef(paper_id, 0)
        items.append(
            AnswerItem(
                text=f"{paper_id} ({count} supporting assertions): {title}",
                kind="MetadataFact",
                evidence=[ref],
            )
        )
        refs.append(ref)
    if not items:
        items.append(_not_found(f"sources contributing evidence about {drug}"))
    return QuestionAnswer(number, question, items, _dedupe_refs(refs))


def generate_report(
    graph: KnowledgeGraph,
    corpus: Corpus,
    req: ReportRequest,
    config: Optional[ReportConfig] = None,
    generated: Optional[str] = None,
) -> DrugReport:
    if not graph.has_entity(req.drug):
        raise UnknownEntity(f"unknown drug {req.drug!r}")
    for target in req.targets:
        if not graph.has_entity(target):
            raise UnknownEntity(f"unknown target {target!r}")
    if not req.targets:
        raise UnknownEntity("report request needs at least one target")
    config = config or default_report_config()
    if generated is None:
        from datetime import datetime, timezone

        generated = datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")

    drug_rec = graph.entity(req.drug)
    cap = req.evidence_per_answer
    answers: list[QuestionAnswer] = []
    all_fact_refs: list[ProvenanceRef] = []

    # Q1: approved indications via the therapeutic subtype set.
    items, refs = _subtype_edge_items(
        graph,
        req.drug,
        config.therapeutic,
        cap,
        f"ChemicalDisease edges of {req.drug} with subtype in {sorted(config.therapeutic)}",
    )
    answers.append(QuestionAnswer(1, QUESTION_TEXTS[0], items, refs))
    all_fact_refs.extend(refs)

    # Q2: molecular structure pointers — figure groundings plus caption mentions.
    items = []
    refs = []
    for g in corpus.groundings:
        if g.entity_id != req.drug:
            continue
        where = f"figure {g.figure_id}" + (f" panel {g.marker}" if g.marker else "")
        if g.paper_id and corpus.has_paper(g.paper_id):
            caption_idx = next(
                (s.sentence_idx for s in corpus.sentences_of(g.paper_id) if s.section == "Caption"),
                0,
            )
            ref = ProvenanceRef(g.paper_id, caption_idx)
            items.append(
                AnswerItem(
                    text=f"{where} shows {drug_rec.name}", kind="KgFact", evidence=[ref]
                )
            )
            refs.append(ref)
        else:
            items.append(AnswerItem(text=f"{where} shows {drug_rec.name}", kind="MetadataFact"))
    for sentence in corpus.iter_sentences():
        if sentence.section != "Caption":
            continue
        if any(m.entity_id == req.drug for m in sentence.mentions):
            ref = ProvenanceRef(sentence.paper_id, sentence.sentence_idx)
            items.append(AnswerItem(text=sentence.text, kind="EvidenceSentence", evidence=[ref]))
            refs.append(ref)
    items = items[: max(cap, 1)]
    if not items:
        items.append(_not_found(f"figure groundings or caption mentions of {req.drug}"))
    answers.append(QuestionAnswer(2, QUESTION_TEXTS[1], items, _dedupe_refs(refs)[:cap]))
    all_fact_refs.extend(r for i in items for r in i.evidence)

    # Q3: connection subgraphs per target.
    items = []
    refs = []
    subgraphs: dict[str, Optional[dict]] = {}
    for target in sorted(req.targets):
        target_rec = graph.entity(target)
        try:
            sub = connection_subgraph(
                graph,
                PathQuery(
                    src=req.drug,
                    dst=target,
                    max_hops=req.max_hops,
                    top_k=req.top_k,
                    mode=req.mode,
                ),
            )
        except NoPathFound:
            subgraphs[target] = None
            items.append(
                _not_found(f"paths {req.drug} -> {target} within {req.max_hops} hops")
            )
            continue
        subgraphs[target] = _subgraph_dict(sub)
        best = sub.paths[0]
        chain = " — ".join(graph.entity(n).name for n in best.nodes)
        evidence = _dedupe_refs(
            ref for key in best.edges for ref in sub.evidence.get(key, [])
        )[:cap]
        items.append(
            AnswerItem(
                text=(
                    f"{len(sub.paths)} ranked paths connecting {drug_rec.name} and "
                    f"{target_rec.name}; best: {chain}"
                ),
                kind="SubgraphRef",
                evidence=evidence,
            )
        )
        refs.extend(evidence)
    answers.append(QuestionAnswer(3, QUESTION_TEXTS[2], items, _dedupe_refs(refs)))
    all_fact_refs.extend(refs)

    # Q4, Q6, Q7, Q8: meta-query templates.
    meta_answers: dict[int, QuestionAnswer] = {}
    for number in META_QUESTION_NUMBERS:
        items, refs = _meta_query_items(
            graph, corpus, req.drug, config.queries.get(number, ()), cap
        )
        meta_answers[number] = QuestionAnswer(number, QUESTION_TEXTS[number - 1], items, refs)
        all_fact_refs.extend(refs)
    answers.append(meta_answers[4])

    # Q5: affiliations.
    q5 = answer_metadata_question(corpus, req.drug, "Affiliations", graph=graph)
    answers.append(q5)
    all_fact_refs.extend(q5.evidence)

    answers.append(meta_answers[6])
    answers.append(meta_answers[7])
    answers.append(meta_answers[8])

    # Q9: funding statements from acknowledgement sections.
    items = []
    refs = []
    for paper_id in corpus.papers_mentioning(req.drug):
        matched_sentences = False
        for sentence in corpus.sentences_of(paper_id):
            if sentence.section != "Acknowledgements":
                continue
            lowered = sentence.text.lower()
            if any(term in lowered for term in FUNDING_LEXICON):
                ref = ProvenanceRef(paper_id, sentence.sentence_idx)
                items.append(
                    AnswerItem(text=sentence.text, kind="EvidenceSentence", evidence=[ref])
                )
                refs.append(ref)
                matched_sentences = True
        if not matched_sentences:
            meta = corpus.paper(paper_id)
            lowered = meta.acknowledgements.lower()
            if meta.acknowledgements and any(term in lowered for term in FUNDING_LEXICON):
                ref = ProvenanceRef(paper_id, 0)
                items.append(
                    AnswerItem(text=meta.acknowledgements, kind="MetadataFact", evidence=[ref])
                )
                refs.append(ref)
    items = items[:cap]
    if not items:
        items.append(_not_found(f"funding statements in papers mentioning {req.drug}"))
    answers.append(QuestionAnswer(9, QUESTION_TEXTS[8], items, _dedupe_refs(refs)[:cap]))
    all_fact_refs.extend(refs)

    # Q10: toxicity edges plus retrieved evidence.
    items, refs = _subtype_edge_items(
        graph,
        req.drug,
        config.toxicity,
        cap,
        f"ChemicalDisease edges of {req.drug} with subtype in {sorted(config.toxicity)}",
    )
    extra_items, extra_refs = _meta_query_items(
        graph, corpus, req.drug, config.queries.get(10, ()), cap
    )
    extra_items = [i for i in extra_items if i.kind != "NotFound"]
    if extra_items and items and items[0].kind == "NotFound":
        items = []
    items = items + extra_items
    refs = _dedupe_refs(refs + extra_refs)
    answers.append(QuestionAnswer(10, QUESTION_TEXTS[9], items, refs))
    all_fact_refs.extend(refs)

    # Q11: sources ranked by provenance contributed to the report above.
    q11 = answer_metadata_question(
        corpus, req.drug, "Sources", graph=graph, fact_refs=all_fact_refs
    )
    answers.append(q11)

    answers.sort(key=lambda a: a.number)
    return DrugReport(request=req, generated=generated, answers=answers, subgraphs=subgraphs)


# --- rendering --------------------------------------------------------------


def canonical_json(obj: dict) -> bytes:
    return (json.dumps(obj, ensure_ascii=False, indent=2) + "\n").encode("utf-8")


def render_report(report: DrugReport, format: str = "structured") -> bytes:
    if format == "structured":
        return canonical_json(report.to_dict())
    if format == "markdown":
        return _render_markdown(report).encode("utf-8")
    raise UnknownFormat(f"unknown report format {format!r}")


def _render_markdown(report: DrugReport) -> str:
    lines = [
        f"# Drug repurposing report: {report.request.drug}",
        "",
        f"generated: {report.generated}",
        f"targets: {', '.join(report.request.targets)}",
        "",
    ]
    for answer in report.answers:
        lines.append(f"## {answer.number}. {answer.question}")
        lines.append("")
        for item in answer.items:
            footnotes = "".join(
                f" [{r.paper_id}:{r.sentence_idx}]" for r in item.evidence
            )
            lines.append(f"- ({item.kind}) {item.text}{footnotes}")
        lines.append("")
    return "\n".join(lines)
