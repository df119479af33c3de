"""The area-level weighted network produced by sampling and collapse.

Node weights hold within-area (internal) edge frequencies, edge weights hold
between-area (external) frequencies.  When normalized, node weights and edge
weights each sum to 1, normalized separately.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from .errors import DataError

SCHEMA = "knet.knowledge_network/1"
_NORM_TOL = 1e-9


@dataclass
class KnowledgeNetwork:
    areas: list[str]
    node_weight: np.ndarray  # (m,)
    edge_weight: np.ndarray  # (m, m) symmetric, zero diagonal
    normalized: bool
    meta: dict = field(default_factory=dict)
    node_se: np.ndarray | None = None  # standard errors of unnormalized means
    edge_se: np.ndarray | None = None

    def __post_init__(self):
        m = len(self.areas)
        self.node_weight = np.asarray(self.node_weight, dtype=np.float64)
        self.edge_weight = np.asarray(self.edge_weight, dtype=np.float64)
        if self.node_weight.shape != (m,) or self.edge_weight.shape != (m, m):
            raise DataError("weight array shapes do not match the area list")
        if (self.node_weight < 0).any() or (self.edge_weight < 0).any():
            raise DataError("weights must be non-negative")
        if not np.array_equal(self.edge_weight, self.edge_weight.T):
            raise DataError("edge weights must be symmetric")
        if np.diag(self.edge_weight).any():
            raise DataError("edge weight diagonal must be zero")
        if self.normalized:
            for label, total in (
                ("node", self.node_weight.sum()),
                ("edge", np.triu(self.edge_weight, 1).sum()),
            ):
                if abs(total - 1.0) > _NORM_TOL:
                    raise DataError(f"normalized {label} weights sum to {total!r}, not 1")

    @property
    def num_areas(self) -> int:
        return len(self.areas)

    def index(self, area: str) -> int:
        try:
            return self.areas.index(area)
        except ValueError:
            raise DataError(f"unknown area {area!r}") from None

    def pair_weight(self, a: str, b: str) -> float:
        return float(self.edge_weight[self.index(a), self.index(b)])

    def normalized_copy(self) -> "KnowledgeNetwork":
        """Same network with node and edge weights divided by their totals."""
        if self.normalized:
            return self
        node_total = float(self.node_weight.sum())
        edge_total = float(np.triu(self.edge_weight, 1).sum())
        if node_total <= 0 or edge_total <= 0:
            raise DataError("zero total weight; cannot normalize (degenerate corpus)")
        meta = dict(self.meta)
        meta["normalized"] = True
        return KnowledgeNetwork(
            list(self.areas), self.node_weight / node_total, self.edge_weight / edge_total,
            True, meta,
        )

    # -- serialization --------------------------------------------------------

    def to_json_dict(self) -> dict:
        m = self.num_areas
        edges = []
        for i in range(m):
            for j in range(i + 1, m):
                w = float(self.edge_weight[i, j])
                if w != 0.0:
                    edges.append({"a": self.areas[i], "b": self.areas[j], "w": w})
        return {
            "schema": SCHEMA,
            "areas": list(self.areas),
            "node_weights": {a: float(w) for a, w in zip(self.areas, self.node_weight)},
            "edge_weights": edges,
            "meta": dict(self.meta),
        }

    def save_json(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json_dict(), indent=2) + "\n", encoding="utf-8")

    @classmethod
    def from_json_dict(cls, obj: dict) -> "KnowledgeNetwork":
        if obj.get("schema") != SCHEMA:
            raise DataError(f"expected schema {SCHEMA}, got {obj.get('schema')!r}")
        areas = list(obj["areas"])
        idx = {a: i for i, a in enumerate(areas)}
        node = np.zeros(len(areas))
        for a, w in obj["node_weights"].items():
            if a not in idx:
                raise DataError(f"node weight for unknown area {a!r}")
            node[idx[a]] = w
        edge = np.zeros((len(areas), len(areas)))
        for rec in obj["edge_weights"]:
            a, b = rec["a"], rec["b"]
            if a not in idx or b not in idx:
                raise DataError(f"edge weight for unknown pair {a!r} -- {b!r}")
            edge[idx[a], idx[b]] = edge[idx[b], idx[a]] = rec["w"]
        meta = dict(obj.get("meta", {}))
        return cls(areas, node, edge, bool(meta.get("normalized", False)), meta)

    @classmethod
    def load_json(cls, path: str | Path) -> "KnowledgeNetwork":
        try:
            obj = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise DataError(f"{path}: invalid JSON ({exc.msg})") from None
        return cls.from_json_dict(obj)

    def save_csv(self, path: str | Path) -> None:
        """Edge list as CSV: area_a,area_b,weight (nonzero pairs only)."""
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["area_a", "area_b", "weight"])
            m = self.num_areas
            for i in range(m):
                for j in range(i + 1, m):
                    w = float(self.edge_weight[i, j])
                    if w != 0.0:
                        writer.writerow([self.areas[i], self.areas[j], repr(w)])

    def save_graphml(self, path: str | Path) -> None:
        lines = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            '<graphml xmlns="http://graphml.graphdrawing.org/xmlns">',
            '  <key id="w" for="node" attr.name="internal_weight" attr.type="double"/>',
            '  <key id="e" for="edge" attr.name="weight" attr.type="double"/>',
            '  <graph id="knowledge" edgedefault="undirected">',
        ]
        for a, w in zip(self.areas, self.node_weight):
            lines.append(
                f'    <node id="{escape(a)}"><data key="w">{float(w)!r}</data></node>'
            )
        m = self.num_areas
        for i in range(m):
            for j in range(i + 1, m):
                w = float(self.edge_weight[i, j])
                if w != 0.0:
                    lines.append(
                        f'    <edge source="{escape(self.areas[i])}" '
                        f'target="{escape(self.areas[j])}">'
                        f'<data key="e">{w!r}</data></edge>'
                    )
        lines += ["  </graph>", "</graphml>", ""]
        Path(path).write_text("\n".join(lines), encoding="utf-8")
