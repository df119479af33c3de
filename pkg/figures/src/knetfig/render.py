"""Render pipeline artifacts to figure files.

Kinds: ``counts`` (per-area article bars from census.json), ``radar``
(external-share radar panels from metrics.json), ``proportions``
(internal/external stacked bars from metrics.json or metrics.csv),
``network`` (area diagram from knowledge_network.json with the backbone DOT
highlighted), ``hypergraph`` (discipline columns with hyperedge hubs from
hypergraph.json).

Rendering is read-only on its inputs and deterministic: the layout comes from
a seeded generator and SVG output hashes are salted with the same seed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from . import artifacts
from .artifacts import ArtifactError
from .layout import spring_layout

KINDS = ("counts", "radar", "proportions", "network", "hypergraph")

HIGHLIGHT = "#e66100"  # backbone edges
PHYSICAL_COLOR = "#4477aa"
BIOLOGICAL_COLOR = "#44aa77"
EDGE_COLOR = "#9aa0a6"


@dataclass
class FigureJob:
    kind: str
    input: Path
    output: Path
    seed: int = 0
    backbone: Path | None = None  # network kind; defaults to sibling backbone.dot

    def __post_init__(self):
        self.input = Path(self.input)
        self.output = Path(self.output)
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r} (use one of {KINDS})")
        if self.output.suffix.lower() not in (".svg", ".png"):
            raise ValueError("output format must be .svg or .png")


@dataclass
class RenderResult:
    figure: "plt.Figure"
    info: dict = field(default_factory=dict)


def render(job: FigureJob) -> RenderResult:
    plt.rcParams["svg.hashsalt"] = str(job.seed)
    result = _RENDERERS[job.kind](job)
    save_kwargs = {"dpi": 150}
    if job.output.suffix.lower() == ".svg":
        save_kwargs["metadata"] = {"Date": None}  # keep bytes reproducible
    result.figure.savefig(job.output, **save_kwargs)
    return result


def _render_counts(job: FigureJob) -> RenderResult:
    census = artifacts.load_json(job.input, artifacts.CENSUS)
    names = [rec["name"] for rec in census["areas"]] + [
        rec["name"] for rec in census["excluded"]
    ]
    values = [rec["count"] for rec in census["areas"]] + [
        rec["count"] for rec in census["excluded"]
    ]
    colors = [PHYSICAL_COLOR] * len(census["areas"]) + ["#bbbbbb"] * len(census["excluded"])
    fig, ax = plt.subplots(figsize=(max(6, 0.45 * len(names)), 4))
    ax.bar(range(len(names)), values, color=colors)
    ax.set_xticks(range(len(names)))
    ax.set_xticklabels(names, rotation=60, ha="right", fontsize=8)
    ax.set_ylabel("articles")
    ax.set_title("Articles per area (grey: excluded)")
    fig.tight_layout()
    return RenderResult(fig, {"bars": len(names)})


def _render_radar(job: FigureJob) -> RenderResult:
    metrics = artifacts.load_metrics_any(job.input)
    shares = metrics["external_share"]
    if not shares:
        raise ArtifactError(f"{job.input}: no external_share rows to plot")
    panels = list(shares)
    fig, axes = plt.subplots(
        1, len(panels), figsize=(4.2 * len(panels), 4.4),
        subplot_kw={"projection": "polar"},
    )
    axes = np.atleast_1d(axes)
    for ax, area in zip(axes, panels):
        row = shares[area]
        spokes = list(row)
        values = [row[s] for s in spokes]
        angles = np.linspace(0, 2 * np.pi, len(spokes), endpoint=False)
        closed_angles = np.concatenate([angles, angles[:1]])
        closed_values = values + values[:1]
        ax.plot(closed_angles, closed_values, color=PHYSICAL_COLOR)
        ax.fill(closed_angles, closed_values, color=PHYSICAL_COLOR, alpha=0.25)
        ax.set_xticks(angles)
        ax.set_xticklabels(spokes, fontsize=7)
        ax.set_title(area, fontsize=10)
    fig.tight_layout()
    return RenderResult(fig, {"panels": panels})


def _render_proportions(job: FigureJob) -> RenderResult:
    metrics = artifacts.load_metrics_any(job.input)
    fractions = metrics["internal_fraction"]
    if not fractions:
        raise ArtifactError(f"{job.input}: no internal_fraction rows to plot")
    names = list(fractions)
    internal = np.array([100.0 * fractions[a] for a in names])
    fig, ax = plt.subplots(figsize=(6, max(3, 0.35 * len(names))))
    y = np.arange(len(names))
    ax.barh(y, internal, color=PHYSICAL_COLOR, label="internal")
    ax.barh(y, 100.0 - internal, left=internal, color=BIOLOGICAL_COLOR, label="external")
    ax.set_yticks(y)
    ax.set_yticklabels(names, fontsize=8)
    ax.invert_yaxis()
    ax.set_xlabel("% of edges")
    ax.legend(loc="lower right", fontsize=8)
    ax.set_xlim(0, 100)
    fig.tight_layout()
    return RenderResult(fig, {"bars": len(names)})


def _render_network(job: FigureJob) -> RenderResult:
    net = artifacts.load_json(job.input, artifacts.NETWORK)
    dot_path = job.backbone or job.input.parent / "backbone.dot"
    dot_edges = artifacts.load_backbone_dot(dot_path)
    areas = list(net["areas"])
    index = {a: i for i, a in enumerate(areas)}
    unknown = [e for e in dot_edges if e["a"] not in index or e["b"] not in index]
    if unknown:
        raise ArtifactError(f"{dot_path}: edge references unknown area {unknown[0]['a']!r}")

    edges = [
        (index[rec["a"]], index[rec["b"]], rec["weight"], rec["backbone"])
        for rec in dot_edges
    ]
    pos = spring_layout(len(areas), [(u, v, w) for u, v, w, _ in edges], job.seed)

    node_w = np.array([net["node_weights"].get(a, 0.0) for a in areas])
    sizes = 300 + 1700 * node_w / node_w.max() if node_w.max() > 0 else np.full(len(areas), 300)
    max_w = max((w for _, _, w, _ in edges), default=1.0)

    fig, ax = plt.subplots(figsize=(8, 8))
    highlighted = 0
    for u, v, w, is_backbone in sorted(edges, key=lambda e: e[3]):  # backbone on top
        xs, ys = (pos[u, 0], pos[v, 0]), (pos[u, 1], pos[v, 1])
        if is_backbone:
            ax.plot(xs, ys, color=HIGHLIGHT, linewidth=1.0 + 5.0 * w / max_w, zorder=2)
            highlighted += 1
        else:
            ax.plot(xs, ys, color=EDGE_COLOR, linewidth=0.3 + 4.0 * w / max_w,
                    alpha=0.6, zorder=1)
    ax.scatter(pos[:, 0], pos[:, 1], s=sizes, c=PHYSICAL_COLOR, zorder=3,
               edgecolors="white")
    for i, area in enumerate(areas):
        ax.annotate(area, pos[i], fontsize=8, ha="center", va="center", zorder=4)
    ax.set_axis_off()
    fig.tight_layout()
    return RenderResult(
        fig,
        {"highlighted_edges": highlighted, "edges": len(edges), "positions": pos},
    )


def _render_hypergraph(job: FigureJob) -> RenderResult:
    hg = artifacts.load_json(job.input, artifacts.HYPERGRAPH)
    physical = list(hg["physical"])
    biological = list(hg["biological"])
    hyperedges = dict(hg["hyperedges"])

    ypos: dict[str, tuple[float, float]] = {}
    for col, names, x in (("phys", physical, 0.0), ("bio", biological, 2.0)):
        for i, name in enumerate(names):
            ypos[name] = (x, -i * 1.0)
    mid_step = (max(len(physical), len(biological)) - 1) / max(1, len(hyperedges) - 1) \
        if len(hyperedges) > 1 else 0.0

    fig, ax = plt.subplots(figsize=(7, max(4, 0.6 * max(len(physical), len(biological)))))
    for j, (area, members) in enumerate(hyperedges.items()):
        hub = (1.0, -j * max(mid_step, 1.0))
        for member in members:
            if member not in ypos:
                raise ArtifactError(f"{job.input}: hyperedge cites unknown discipline {member!r}")
            ax.plot(
                [hub[0], ypos[member][0]], [hub[1], ypos[member][1]],
                color=EDGE_COLOR, linewidth=1.2, alpha=0.8, zorder=1,
            )
        ax.scatter(*hub, s=700, c="#ddcc77", zorder=2, edgecolors="white")
        ax.annotate(area, hub, fontsize=7, ha="center", va="center", zorder=3)
    for name, color in [(n, PHYSICAL_COLOR) for n in physical] + [
        (n, BIOLOGICAL_COLOR) for n in biological
    ]:
        ax.scatter(*ypos[name], s=500, c=color, zorder=2, edgecolors="white")
        ax.annotate(name, ypos[name], fontsize=7, ha="center", va="center", zorder=3)
    ax.set_axis_off()
    fig.tight_layout()
    return RenderResult(fig, {"hyperedges": len(hyperedges)})


_RENDERERS = {
    "counts": _render_counts,
    "radar": _render_radar,
    "proportions": _render_proportions,
    "network": _render_network,
    "hypergraph": _render_hypergraph,
}
