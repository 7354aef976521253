"""Facet counting, constraint algebra, and the action heatmap."""

import random

import pytest

from litkg.errors import UnknownFacet
from litkg.facets import (
    FACET_KINDS,
    Constraint,
    facet_counts,
    heatmap,
    parse_constraint,
)
from litkg.kg_store import (
    AssertionEdge,
    EntityRecord,
    EventAssertion,
    KnowledgeGraph,
    ProvenanceRef,
)


def event_graph() -> KnowledgeGraph:
    g = KnowledgeGraph()
    for i in range(4):
        g.upsert_entity(EntityRecord(id=f"GENE:{i}", name=f"gene{i}", coarse_type="Gene"))
    for i in range(3):
        g.add_event(
            EventAssertion(
                event_type="Phosphorylation",
                trigger=f"t{i}",
                roles={"Theme": f"GENE:{i}"},
                provenance={ProvenanceRef(f"p{i}", 0)},
            )
        )
    g.add_event(
        EventAssertion(
            event_type="Binding",
            trigger="bind",
            roles={"Theme": "GENE:0", "Theme2": "GENE:1"},
            provenance={ProvenanceRef("p9", 0)},
        )
    )
    return g


class TestFacetCounts:
    def test_empty_graph(self):
        counts = facet_counts(KnowledgeGraph(), [], "EventType")
        assert counts.entries == ()

    def test_event_type_counts(self):
        counts = facet_counts(event_graph(), [], "EventType")
        assert counts.entries == (("Phosphorylation", 3), ("Binding", 1))

    def test_entity_name_constraint_restricts(self, store):
        graph, _ = store
        unconstrained = facet_counts(graph, [], "EventType")
        constrained = facet_counts(
            graph, [Constraint("EntityName", "EIF2AK2")], "EventType"
        )
        # all assertions counted under the constraint involve EIF2AK2
        assert dict(constrained.entries) == {"Binding": 2, "Phosphorylation": 1}
        assert sum(dict(constrained.entries).values()) <= sum(dict(unconstrained.entries).values())

    def test_counts_match_manual_recount(self, store):
        graph, _ = store
        counts = dict(facet_counts(graph, [], "RelationSubtype").entries)
        manual = {}
        for edge in graph.edges():
            if edge.category != "Event":
                manual[edge.subtype] = manual.get(edge.subtype, 0) + 1
        assert counts == manual

    def test_unknown_facet(self, store):
        graph, _ = store
        with pytest.raises(UnknownFacet):
            facet_counts(graph, [], "Nope")

    def test_duplicate_constraints_collapse(self, store):
        graph, _ = store
        c = Constraint("CoarseType", "Chemical")
        once = facet_counts(graph, [c], "Action")
        twice = facet_counts(graph, [c, c], "Action")
        assert once == twice

    def test_anti_monotonicity_random_constraints(self, store):
        graph, _ = store
        rng = random.Random(23)
        values = {
            "EntityName": ["Losartan", "TNF", "EIF2AK2", "hypertension"],
            "CoarseType": ["Chemical", "Gene", "Disease", "Organism"],
            "FineType": ["GENE_OR_GENOME", "CELL_LINE"],
            "RelationSubtype": ["therapeutic", "marker/mechanism", "decreases^expression"],
            "EventType": ["Binding", "Phosphorylation"],
            "Action": ["Increase", "Decrease", "Affect"],
            "PaperId": ["p-losartan-2020", "p-eif2ak2-2020"],
        }
        for _ in range(50):
            constraints = []
            baseline = {
                kind: dict(facet_counts(graph, constraints, kind).entries)
                for kind in FACET_KINDS
            }
            for _ in range(rng.randint(1, 3)):
                facet = rng.choice(list(values))
                constraints.append(Constraint(facet, rng.choice(values[facet])))
                tightened = {
                    kind: dict(facet_counts(graph, constraints, kind).entries)
                    for kind in FACET_KINDS
                }
                for kind in FACET_KINDS:
                    for term, count in tightened[kind].items():
                        assert count <= baseline[kind].get(term, 0)
                baseline = tightened


class TestParseConstraint:
    def test_value_may_contain_colons(self):
        c = parse_constraint("EntityName:MESH:D008784")
        assert c == Constraint("EntityName", "MESH:D008784")

    @pytest.mark.parametrize("raw", ["Nope:x", "EntityName", "EntityName:", ":x"])
    def test_bad_constraints(self, raw):
        with pytest.raises(UnknownFacet):
            parse_constraint(raw)


class TestHeatmap:
    def test_gene_disease_cell(self):
        g = KnowledgeGraph()
        g.upsert_entity(EntityRecord(id="GENE:1", name="G", coarse_type="Gene"))
        g.upsert_entity(EntityRecord(id="MESH:D000001", name="D", coarse_type="Disease"))
        g.add_assertion(
            AssertionEdge(
                "GENE:1",
                "MESH:D000001",
                "GeneDisease",
                "marker/mechanism",
                "Decrease",
                {ProvenanceRef("p1", 0), ProvenanceRef("p2", 0)},
            )
        )
        matrix = heatmap(g, [], "Gene", "Disease")
        assert matrix.rows == ("G",) and matrix.cols == ("D",)
        cell = matrix.cells[0]
        assert (cell.action_symbol, cell.support) == ("--", 2)

    def test_empty_matrix(self):
        matrix = heatmap(KnowledgeGraph(), [], "Gene", "Disease")
        assert matrix.cells == ()

    def test_equal_increase_decrease_resolves_to_affect(self):
        g = KnowledgeGraph()
        g.upsert_entity(EntityRecord(id="GENE:1", name="G", coarse_type="Gene"))
        g.upsert_entity(EntityRecord(id="MESH:D000001", name="D", coarse_type="Disease"))
        g.add_assertion(
            AssertionEdge(
                "GENE:1", "MESH:D000001", "GeneDisease", "marker/mechanism", "Increase",
                {ProvenanceRef("p1", 0)},
            )
        )
        g.add_assertion(
            AssertionEdge(
                "GENE:1", "MESH:D000001", "GeneDisease", "marker/mechanism", "Decrease",
                {ProvenanceRef("p2", 0)},
            )
        )
        matrix = heatmap(g, [], "Gene", "Disease")
        assert matrix.cells[0].action_symbol == "→"
        assert matrix.cells[0].support == 2

    def test_axis_must_be_coarse_type(self, store):
        graph, _ = store
        with pytest.raises(UnknownFacet):
            heatmap(graph, [], "Gene", "Protein")

    def test_fixture_gene_disease_matrix(self, store):
        graph, _ = store
        matrix = heatmap(graph, [], "Gene", "Disease")
        cells = {(c.row, c.col): (c.action_symbol, c.support) for c in matrix.cells}
        assert cells[("tumor protein p53", "lung cancer")] == ("→", 1)
        assert cells[("TNF", "obesity")] == ("--", 1)
