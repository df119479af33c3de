"""Literature-review table, its bipartite hypergraph, and network agreement.

The review table is a CSV whose header row names the discipline columns and
whose first column names one interdisciplinary area per row; each cell holds
semicolon-separated citation keys.  The discipline partition (physical vs
biological) comes from a sidecar JSON ``<table>.partition.json`` with shape
``{"physical": [...], "biological": [...]}``.

Row totals count distinct citations across the row; column totals sum the
per-cell key counts.  A hyperedge is the set of disciplines whose cell in
that area's row is non-empty.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DataError
from .network import KnowledgeNetwork


@dataclass
class ReviewTable:
    areas: list[str]  # row order
    disciplines: list[str]  # column order
    physical: list[str]
    biological: list[str]
    cells: dict[tuple[str, str], tuple[str, ...]]  # (area, discipline) -> citation keys

    def count(self, area: str, discipline: str) -> int:
        return len(self.cells.get((area, discipline), ()))

    def row_total(self, area: str) -> int:
        distinct = set()
        for d in self.disciplines:
            distinct.update(self.cells.get((area, d), ()))
        return len(distinct)

    def col_total(self, discipline: str) -> int:
        return sum(self.count(a, discipline) for a in self.areas)


@dataclass
class Hypergraph:
    vertices: list[str]  # physical then biological disciplines
    hyperedges: dict[str, frozenset[str]]
    physical: list[str] = field(default_factory=list)
    biological: list[str] = field(default_factory=list)


@dataclass
class AgreementEntry:
    area: str
    predicted: list[str]  # strongest-first
    reference: list[str]
    precision: float
    recall: float
    jaccard: float


@dataclass
class AgreementReport:
    entries: list[AgreementEntry]
    unreviewed: list[tuple[str, str]]  # (area, network-strong discipline not reviewed)

    @property
    def mean_precision(self) -> float:
        return sum(e.precision for e in self.entries) / len(self.entries)

    @property
    def mean_recall(self) -> float:
        return sum(e.recall for e in self.entries) / len(self.entries)

    @property
    def mean_jaccard(self) -> float:
        return sum(e.jaccard for e in self.entries) / len(self.entries)

    def to_json_dict(self) -> dict:
        return {
            "schema": "knet.agreement/1",
            "areas": [
                {
                    "area": e.area,
                    "predicted": e.predicted,
                    "reference": e.reference,
                    "precision": e.precision,
                    "recall": e.recall,
                    "jaccard": e.jaccard,
                }
                for e in self.entries
            ],
            "macro": {
                "precision": self.mean_precision,
                "recall": self.mean_recall,
                "jaccard": self.mean_jaccard,
            },
            "unreviewed": [{"area": a, "discipline": d} for a, d in self.unreviewed],
        }

    def to_text(self) -> str:
        lines = []
        for e in self.entries:
            lines.append(f"{e.area}:")
            lines.append(f"  network top-{len(e.predicted)}: {', '.join(e.predicted)}")
            lines.append(f"  review:            {', '.join(e.reference)}")
            lines.append(
                f"  precision={e.precision:.3f} recall={e.recall:.3f} jaccard={e.jaccard:.3f}"
            )
        lines.append(
            f"macro: precision={self.mean_precision:.3f} "
            f"recall={self.mean_recall:.3f} jaccard={self.mean_jaccard:.3f}"
        )
        if self.unreviewed:
            pairs = ", ".join(f"{a} -> {d}" for a, d in self.unreviewed)
            lines.append(f"network-strong but unreviewed: {pairs}")
        return "\n".join(lines) + "\n"


def parse_review_table(path: str | Path, partition: str | Path | None = None) -> ReviewTable:
    """Parse a review table CSV plus its discipline-partition sidecar."""
    path = Path(path)
    if partition is None:
        partition = path.parent / (path.stem + ".partition.json")
    try:
        part = json.loads(Path(partition).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise DataError(f"discipline partition sidecar not found: {partition}") from None
    except json.JSONDecodeError as exc:
        raise DataError(f"{partition}: invalid JSON ({exc.msg})") from None
    physical = list(part.get("physical", []))
    biological = list(part.get("biological", []))
    known = set(physical) | set(biological)
    if not known:
        raise DataError(f"{partition}: empty discipline partition")

    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise DataError(f"{path}: empty review table")
    header = rows[0]
    disciplines = [h.strip() for h in header[1:]]
    for d in disciplines:
        if d not in known:
            raise DataError(f"{path}: unknown discipline column {d!r}")

    areas: list[str] = []
    cells: dict[tuple[str, str], tuple[str, ...]] = {}
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or not any(f.strip() for f in row):
            continue
        if len(row) != len(header):
            raise DataError(f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}")
        area = row[0].strip()
        if not area:
            raise DataError(f"{path}:{lineno}: empty area name")
        if area in areas:
            raise DataError(f"{path}:{lineno}: duplicate row {area!r}")
        areas.append(area)
        for d, cell in zip(disciplines, row[1:]):
            keys = tuple(k.strip() for k in cell.split(";") if k.strip())
            if keys:
                cells[(area, d)] = keys

    return ReviewTable(
        areas=areas, disciplines=disciplines, physical=physical,
        biological=biological, cells=cells,
    )


def build_hypergraph(table: ReviewTable) -> Hypergraph:
    """One hyperedge per interdisciplinary area over its cited disciplines."""
    hyperedges: dict[str, frozenset[str]] = {}
    for area in table.areas:
        members = frozenset(d for d in table.disciplines if table.count(area, d) > 0)
        if not members:
            raise DataError(f"area {area!r} cites no disciplines (empty hyperedge)")
        hyperedges[area] = members
    return Hypergraph(
        vertices=list(table.physical) + list(table.biological),
        hyperedges=hyperedges,
        physical=list(table.physical),
        biological=list(table.biological),
    )


def hypergraph_json_dict(hg: Hypergraph) -> dict:
    return {
        "schema": "knet.hypergraph/1",
        "physical": hg.physical,
        "biological": hg.biological,
        "hyperedges": {
            area: [d for d in hg.vertices if d in members]
            for area, members in hg.hyperedges.items()
        },
    }


def compare_with_network(
    hg: Hypergraph, net: KnowledgeNetwork, focus: list[str] | None = None
) -> AgreementReport:
    """Score each hyperedge against the area's strongest network neighbors.

    For a focus area with hyperedge size m, the prediction is its m heaviest
    discipline neighbors in the network (ties broken by name).  Precision and
    recall coincide because both sets have size m.
    """
    if focus is None:
        focus = [h for h in hg.hyperedges if h in net.areas]
    if not focus:
        raise DataError("no focus areas present in both the hypergraph and the network")
    vertex_set = set(hg.vertices)

    entries = []
    unreviewed: list[tuple[str, str]] = []
    for area in focus:
        if area not in hg.hyperedges:
            raise DataError(f"area {area!r} has no hyperedge in the review")
        reference = hg.hyperedges[area]
        missing = [d for d in reference if d not in net.areas]
        if missing:
            raise DataError(
                f"review disciplines absent from the network: {', '.join(sorted(missing))}"
            )
        i = net.index(area)
        candidates = [
            (-float(net.edge_weight[i, j]), net.areas[j])
            for j in range(net.num_areas)
            if net.areas[j] in vertex_set
            and net.areas[j] != area
            and net.edge_weight[i, j] > 0
        ]
        m = len(reference)
        if m > len(candidates):
            raise DataError(
                f"area {area!r}: hyperedge size {m} exceeds its {len(candidates)} "
                "network neighbors"
            )
        candidates.sort()
        predicted = [name for _, name in candidates[:m]]
        overlap = len(set(predicted) & reference)
        entries.append(
            AgreementEntry(
                area=area,
                predicted=predicted,
                reference=[d for d in hg.vertices if d in reference],
                precision=overlap / m,
                recall=overlap / m,
                jaccard=overlap / (2 * m - overlap),
            )
        )
        unreviewed.extend((area, d) for d in predicted if d not in reference)

    return AgreementReport(entries=entries, unreviewed=unreviewed)
