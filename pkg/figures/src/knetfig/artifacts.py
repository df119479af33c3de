"""Schema-checked loaders for the pipeline's file artifacts.

This package talks to the pipeline only through its documented files:
JSON artifacts carry a ``schema`` field that must match the expected
version, the metrics CSV is identified by its exact header row, and the
backbone DOT file follows the writer's documented subset
(``"a" -- "b" [weight=..., backbone=true, ...];``).
"""
from __future__ import annotations

import csv
import json
import re
from pathlib import Path


class ArtifactError(Exception):
    """Raised when an input artifact does not match its expected schema."""


CENSUS = "knet.census/1"
NETWORK = "knet.knowledge_network/1"
METRICS = "knet.metrics/1"
HYPERGRAPH = "knet.hypergraph/1"
METRICS_CSV_HEADER = ["metric", "area", "neighbor", "value"]


def load_json(path: str | Path, expected_schema: str) -> dict:
    path = Path(path)
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ArtifactError(f"{path}: no such artifact") from None
    except json.JSONDecodeError as exc:
        raise ArtifactError(f"{path}: invalid JSON ({exc.msg})") from None
    got = obj.get("schema") if isinstance(obj, dict) else None
    if got != expected_schema:
        raise ArtifactError(f"{path}: expected schema {expected_schema}, got {got!r}")
    return obj


def load_metrics_any(path: str | Path) -> dict:
    """Accept metrics as JSON or tidy CSV; return the JSON-shaped dict."""
    path = Path(path)
    if path.suffix.lower() == ".json":
        return load_json(path, METRICS)
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != METRICS_CSV_HEADER:
        raise ArtifactError(
            f"{path}: expected metrics CSV with header {','.join(METRICS_CSV_HEADER)}"
        )
    external: dict[str, dict[str, float]] = {}
    internal: dict[str, float] = {}
    for metric, area, neighbor, value in rows[1:]:
        if metric == "internal_fraction":
            internal[area] = float(value)
        elif metric == "external_share":
            external.setdefault(area, {})[neighbor] = float(value)
        else:
            raise ArtifactError(f"{path}: unknown metric row {metric!r}")
    return {"schema": METRICS, "external_share": external, "internal_fraction": internal}


_DOT_EDGE = re.compile(r'^\s*"([^"]+)"\s*--\s*"([^"]+)"\s*\[(.*)\];\s*$')
_DOT_ATTR = re.compile(r'(\w+)=("[^"]*"|[^,\]]+)')


def load_backbone_dot(path: str | Path) -> list[dict]:
    """Edges from the backbone DOT export: name pair, weight, backbone flag."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ArtifactError(f"{path}: no such artifact") from None
    if "graph knowledge_network" not in text:
        raise ArtifactError(f"{path}: expected a knowledge_network DOT file")
    edges = []
    for line in text.splitlines():
        match = _DOT_EDGE.match(line)
        if not match:
            continue
        attrs = {k: v.strip('"') for k, v in _DOT_ATTR.findall(match.group(3))}
        edges.append(
            {
                "a": match.group(1),
                "b": match.group(2),
                "weight": float(attrs.get("weight", 0.0)),
                "backbone": attrs.get("backbone") == "true",
            }
        )
    return edges
