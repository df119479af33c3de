from __future__ import annotations

import numpy as np
import pytest

import knet
from knet.errors import DataError

from conftest import TABLE1

PHYSICAL = ["Mathematics", "Computer Science", "Applied Mathematics",
            "Dynamical Systems", "Chemistry", "Engineering"]
BIOLOGICAL = ["Ecology", "Molecular Biology", "Biology", "Biotechnology",
              "Medicine", "Health Sciences"]

ROW_TOTALS = {
    "Computational Ecology": 3,
    "Bioinformatics": 3,
    "Systems Biology": 5,
    "Computational Biology": 4,
    "Biomedical Engineering": 3,
    "Biochemistry": 2,
}
COLUMN_TOTALS = dict(zip(PHYSICAL + BIOLOGICAL, [4, 15, 8, 5, 2, 3, 3, 11, 5, 0, 3, 3]))


@pytest.fixture(scope="module")
def table():
    return knet.parse_review_table(TABLE1)


class TestParseReviewTable:
    def test_published_column_totals(self, table):
        assert table.col_total("Computer Science") == 15
        assert table.col_total("Molecular Biology") == 11
        assert table.col_total("Biotechnology") == 0
        for discipline, total in COLUMN_TOTALS.items():
            assert table.col_total(discipline) == total, discipline

    def test_published_row_totals(self, table):
        assert table.row_total("Biochemistry") == 2
        assert table.row_total("Systems Biology") == 5
        for area, total in ROW_TOTALS.items():
            assert table.row_total(area) == total, area

    def test_totals_self_consistency(self, table):
        cell_sum = sum(len(keys) for keys in table.cells.values())
        assert sum(table.col_total(d) for d in table.disciplines) == cell_sum

    def test_empty_body(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text("area,Chemistry,Biology\n")
        (tmp_path / "t.partition.json").write_text(
            '{"physical": ["Chemistry"], "biological": ["Biology"]}'
        )
        table = knet.parse_review_table(path)
        assert table.areas == []
        assert table.col_total("Chemistry") == 0

    def test_unknown_discipline_column(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text("area,Alchemy\nX,k1\n")
        (tmp_path / "t.partition.json").write_text(
            '{"physical": ["Chemistry"], "biological": []}'
        )
        with pytest.raises(DataError, match="Alchemy"):
            knet.parse_review_table(path)

    def test_duplicate_row_name(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text("area,Chemistry\nX,k1\nX,k2\n")
        (tmp_path / "t.partition.json").write_text(
            '{"physical": ["Chemistry"], "biological": []}'
        )
        with pytest.raises(DataError, match="duplicate"):
            knet.parse_review_table(path)


class TestBuildHypergraph:
    def test_biochemistry_hyperedge(self, table):
        hg = knet.build_hypergraph(table)
        assert hg.hyperedges["Biochemistry"] == {"Chemistry", "Molecular Biology", "Biology"}

    def test_bioinformatics_hyperedge(self, table):
        hg = knet.build_hypergraph(table)
        assert hg.hyperedges["Bioinformatics"] == {
            "Computer Science", "Applied Mathematics", "Molecular Biology", "Biology",
        }

    def test_single_cell_table_gives_singleton(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text("area,Chemistry\nX,k1;k2\n")
        (tmp_path / "t.partition.json").write_text(
            '{"physical": ["Chemistry"], "biological": []}'
        )
        hg = knet.build_hypergraph(knet.parse_review_table(path))
        assert hg.hyperedges == {"X": frozenset({"Chemistry"})}

    def test_all_zero_row_rejected(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text("area,Chemistry\nX,\n")
        (tmp_path / "t.partition.json").write_text(
            '{"physical": ["Chemistry"], "biological": []}'
        )
        with pytest.raises(DataError, match="'X'"):
            knet.build_hypergraph(knet.parse_review_table(path))

    def test_monotone_under_added_citations(self, tmp_path):
        partition = '{"physical": ["P1", "P2"], "biological": ["B1"]}'
        before = tmp_path / "before.csv"
        before.write_text("area,P1,P2,B1\nX,k1,,k2\n")
        (tmp_path / "before.partition.json").write_text(partition)
        after = tmp_path / "after.csv"
        after.write_text("area,P1,P2,B1\nX,k1,k9,k2\n")
        (tmp_path / "after.partition.json").write_text(partition)
        hg_before = knet.build_hypergraph(knet.parse_review_table(before))
        hg_after = knet.build_hypergraph(knet.parse_review_table(after))
        assert hg_before.hyperedges["X"] <= hg_after.hyperedges["X"]


def hand_hypergraph():
    return knet.Hypergraph(
        vertices=["A", "B", "C"],
        hyperedges={"X": frozenset({"A", "B"}), "Y": frozenset({"A", "C"})},
        physical=["A", "B"],
        biological=["C"],
    )


def hand_network(scale=1.0):
    areas = ["X", "Y", "A", "B", "C"]
    w = np.zeros((5, 5))

    def put(a, b, value):
        i, j = areas.index(a), areas.index(b)
        w[i, j] = w[j, i] = value * scale

    put("X", "A", 5.0)
    put("X", "B", 1.0)
    put("X", "C", 3.0)
    put("Y", "A", 2.0)
    put("Y", "B", 4.0)
    put("Y", "C", 1.0)
    return knet.KnowledgeNetwork(areas, np.ones(5), w, normalized=False)


class TestCompareWithNetwork:
    def test_self_agreement_scores_one(self):
        hg = hand_hypergraph()
        net = hand_network()
        # reference sets equal to the network's top-m neighbor sets
        hg.hyperedges = {"X": frozenset({"A", "C"}), "Y": frozenset({"A", "B"})}
        report = knet.compare_with_network(hg, net, ["X", "Y"])
        assert all(e.precision == e.recall == e.jaccard == 1.0 for e in report.entries)
        assert report.unreviewed == []

    def test_disjoint_sets_score_zero(self):
        hg = knet.Hypergraph(
            vertices=["A", "B", "C"],
            hyperedges={"X": frozenset({"B"})},  # top-1 of X is A
            physical=["A", "B", "C"],
            biological=[],
        )
        report = knet.compare_with_network(hg, hand_network(), ["X"])
        entry = report.entries[0]
        assert entry.precision == entry.recall == entry.jaccard == 0.0
        assert report.unreviewed == [("X", "A")]

    def test_hand_computed_fixture(self):
        # X: top-2 {A, C} vs {A, B} -> overlap 1, jaccard 1/3
        # Y: top-2 {B, A} vs {A, C} -> overlap 1, jaccard 1/3
        report = knet.compare_with_network(hand_hypergraph(), hand_network(), ["X", "Y"])
        by_area = {e.area: e for e in report.entries}
        assert by_area["X"].predicted == ["A", "C"]
        assert by_area["X"].precision == pytest.approx(0.5)
        assert by_area["X"].jaccard == pytest.approx(1 / 3)
        assert by_area["Y"].jaccard == pytest.approx(1 / 3)
        assert report.mean_jaccard == pytest.approx(1 / 3)
        assert set(report.unreviewed) == {("X", "C"), ("Y", "B")}

    def test_invariant_under_weight_scaling(self):
        a = knet.compare_with_network(hand_hypergraph(), hand_network(), ["X", "Y"])
        b = knet.compare_with_network(hand_hypergraph(), hand_network(scale=123.0), ["X", "Y"])
        assert a.to_json_dict() == b.to_json_dict()

    def test_hyperedge_larger_than_neighborhood(self):
        hg = knet.Hypergraph(
            vertices=["A", "B", "C"],
            hyperedges={"X": frozenset({"A", "B", "C"})},
            physical=["A", "B", "C"],
            biological=[],
        )
        net = hand_network()
        i, j = net.areas.index("X"), net.areas.index("B")
        net.edge_weight[i, j] = net.edge_weight[j, i] = 0.0  # X keeps 2 neighbors
        with pytest.raises(DataError, match="exceeds"):
            knet.compare_with_network(hg, net, ["X"])

    def test_reference_discipline_missing_from_network(self):
        hg = knet.Hypergraph(
            vertices=["A", "Z"],
            hyperedges={"X": frozenset({"Z"})},
            physical=["A", "Z"],
            biological=[],
        )
        with pytest.raises(DataError, match="Z"):
            knet.compare_with_network(hg, hand_network(), ["X"])
