"""Analyses on a knowledge network: backbone, external shares, proportions.

The backbone is the smallest set of strongest edges keeping every area in one
component, i.e. the maximum-weight spanning tree.  External shares give, per
area, the percentage of its between-area weight pointing at each neighbor.
Internal fractions need unnormalized averaged counts, because node and edge
weights are normalized by different totals and the within-area ratio would
otherwise be distorted.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path


from .errors import DataError
from .network import KnowledgeNetwork


@dataclass
class Backbone:
    edges: list[tuple[str, str, float]]

    @property
    def total_weight(self) -> float:
        return float(sum(w for _, _, w in self.edges))


@dataclass
class MetricsReport:
    external_share: dict[str, dict[str, float]]  # area -> neighbor -> percentage
    internal_fraction: dict[str, float]

    def to_json_dict(self) -> dict:
        return {
            "schema": "knet.metrics/1",
            "external_share": self.external_share,
            "internal_fraction": self.internal_fraction,
        }


def backbone_mst(net: KnowledgeNetwork) -> Backbone:
    """Maximum-weight spanning tree over positive-weight area pairs.

    Kruskal on descending weight; equal weights break ties by the
    lexicographic (a, b) name pair so the result is deterministic.
    """
    m = net.num_areas
    candidates = []
    for i in range(m):
        for j in range(i + 1, m):
            w = float(net.edge_weight[i, j])
            if w > 0:
                a, b = sorted((net.areas[i], net.areas[j]))
                candidates.append((-w, a, b, i, j))
    candidates.sort()

    parent = list(range(m))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tree: list[tuple[str, str, float]] = []
    for neg_w, a, b, i, j in candidates:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            tree.append((a, b, -neg_w))
        if len(tree) == m - 1:
            break

    if len(tree) != m - 1:
        comps: dict[int, list[str]] = {}
        for i in range(m):
            comps.setdefault(find(i), []).append(net.areas[i])
        listing = "; ".join("{" + ", ".join(c) + "}" for c in comps.values())
        raise DataError(f"knowledge network is disconnected: components {listing}")
    return Backbone(edges=tree)


def external_shares(
    net: KnowledgeNetwork, focus: list[str] | None = None
) -> dict[str, dict[str, float]]:
    """Per focus area, percentage of its external weight toward each neighbor."""
    focus = list(net.areas) if focus is None else list(focus)
    shares: dict[str, dict[str, float]] = {}
    for area in focus:
        i = net.index(area)
        row = net.edge_weight[i]
        total = float(row.sum())
        if total <= 0:
            raise DataError(f"area {area!r} has zero external weight")
        shares[area] = {
            net.areas[j]: 100.0 * float(row[j]) / total
            for j in range(net.num_areas)
            if row[j] > 0
        }
    return shares


def internal_external_proportions(
    net: KnowledgeNetwork, focus: list[str] | None = None
) -> MetricsReport:
    """Internal-edge fraction per area plus external shares for focus areas.

    ``net`` must carry unnormalized averaged counts.  internal_fraction(a) is
    I_a / (I_a + sum_b W_ab); an area with no weight at all is an error.
    """
    if net.normalized:
        raise DataError("proportions need unnormalized counts, got a normalized network")
    fractions: dict[str, float] = {}
    for i, area in enumerate(net.areas):
        internal = float(net.node_weight[i])
        external = float(net.edge_weight[i].sum())
        if internal + external <= 0:
            raise DataError(f"area {area!r} has zero total weight")
        fractions[area] = internal / (internal + external)
    return MetricsReport(
        external_share=external_shares(net, focus),
        internal_fraction=fractions,
    )


def save_metrics_json(report: MetricsReport, path: str | Path) -> None:
    Path(path).write_text(json.dumps(report.to_json_dict(), indent=2) + "\n", encoding="utf-8")


def save_metrics_csv(report: MetricsReport, path: str | Path) -> None:
    """Tidy CSV: one internal_fraction row per area, one external_share row per pair."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["metric", "area", "neighbor", "value"])
        for area, frac in report.internal_fraction.items():
            writer.writerow(["internal_fraction", area, "", repr(frac)])
        for area, row in report.external_share.items():
            for neighbor, pct in row.items():
                writer.writerow(["external_share", area, neighbor, repr(pct)])


def save_backbone_dot(net: KnowledgeNetwork, backbone: Backbone, path: str | Path) -> None:
    """DOT export of the full network with backbone edges marked.

    Backbone edges carry ``backbone=true`` and ``color="orange"``; node
    ``weight`` is the internal weight, edge ``weight`` the pair weight.
    """
    marked = {(a, b) for a, b, _ in backbone.edges}
    lines = ["graph knowledge_network {"]
    for a, w in zip(net.areas, net.node_weight):
        lines.append(f'  "{a}" [weight={float(w)!r}];')
    m = net.num_areas
    for i in range(m):
        for j in range(i + 1, m):
            w = float(net.edge_weight[i, j])
            if w == 0.0:
                continue
            a, b = sorted((net.areas[i], net.areas[j]))
            attrs = f"weight={w!r}"
            if (a, b) in marked:
                attrs += ', backbone=true, color="orange"'
            lines.append(f'  "{a}" -- "{b}" [{attrs}];')
    lines += ["}", ""]
    Path(path).write_text("\n".join(lines), encoding="utf-8")
