"""Article-level citation graph: construction, census, import/export.

The graph is undirected and simple: reciprocal links collapse to one edge,
self-links and duplicates are dropped (and counted).  Vertex ids are assigned
area-major, so each area's members occupy one contiguous id range; this keeps
per-area sampling cache friendly.

Binary graph format (little-endian throughout), version 1:

    magic     8 bytes   b"KNETGR\\x00\\x01" (last byte = format version)
    n_areas   u32
    per area: u32 name byte-length, UTF-8 name, u32 member count
    titles    u8 flag; if 1, per vertex: u32 byte-length + UTF-8 title
    n_edges   u64
    edges     2 * n_edges u32 endpoints, each pair (u, v) with u < v,
              pairs sorted lexicographically
"""
from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator
from xml.sax.saxutils import escape

import numpy as np

from .corpus import AreaAssignment
from .errors import DataError, InvariantError

_MAGIC = b"KNETGR\x00\x01"


@dataclass
class LinkStats:
    """Bookkeeping from build_graph; all dropped links are accounted for."""

    read: int = 0
    kept: int = 0
    dropped_unknown: int = 0
    dropped_self: int = 0
    duplicates: int = 0

    def as_dict(self) -> dict:
        return {
            "schema": "knet.link_report/1",
            "read": self.read,
            "kept": self.kept,
            "dropped_unknown": self.dropped_unknown,
            "dropped_self": self.dropped_self,
            "duplicates": self.duplicates,
        }


class ArticleGraph:
    """Immutable undirected simple graph with a disjoint area label per vertex."""

    def __init__(
        self,
        areas: list[str],
        area_of: np.ndarray,
        edges: np.ndarray,
        titles: list[str] | None = None,
        link_stats: LinkStats | None = None,
    ):
        self.areas = list(areas)
        self.area_of = np.asarray(area_of, dtype=np.int64)
        self.n = int(self.area_of.shape[0])
        self.titles = list(titles) if titles is not None else None
        self.link_stats = link_stats

        m = len(self.areas)
        if m == 0 or self.n == 0:
            raise DataError("graph needs at least one area with one vertex")
        if self.titles is not None and len(self.titles) != self.n:
            raise DataError("titles length does not match vertex count")
        if self.area_of.min() < 0 or self.area_of.max() >= m:
            raise DataError("area_of contains an out-of-range area index")

        counts = np.bincount(self.area_of, minlength=m)
        if (counts == 0).any():
            empty = [self.areas[i] for i in np.flatnonzero(counts == 0)]
            raise DataError(f"areas without vertices: {', '.join(empty)}")
        self.area_sizes = counts.astype(np.int64)
        self.area_members = [np.flatnonzero(self.area_of == i) for i in range(m)]

        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if edges.size:
            if edges.min() < 0 or edges.max() >= self.n:
                raise DataError("edge endpoint out of range")
            if (edges[:, 0] == edges[:, 1]).any():
                raise DataError("self-loops are not allowed")
            edges = np.sort(edges, axis=1)
            edges = np.unique(edges, axis=0)
        self.edges = edges

    @property
    def num_edges(self) -> int:
        return int(self.edges.shape[0])

    @property
    def num_areas(self) -> int:
        return len(self.areas)

    def edge_area_pairs(self) -> np.ndarray:
        """(E, 2) array of sorted area indices per edge."""
        pairs = self.area_of[self.edges]
        return np.sort(pairs, axis=1) if pairs.size else pairs.reshape(-1, 2)


@dataclass
class AreaCounts:
    """Per-area internal and per-pair external edge counts (or averages).

    ``external`` is a symmetric matrix with a zero diagonal; ``internal[a]``
    counts edges with both endpoints in area ``a``.
    """

    internal: np.ndarray
    external: np.ndarray

    def total(self) -> float:
        return float(self.internal.sum() + np.triu(self.external, 1).sum())


def read_links(path: str | Path) -> Iterator[tuple[str, str]]:
    """Yield (source_title, target_title) pairs from a TSV link file."""
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n").rstrip("\r")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 2 or not fields[0] or not fields[1]:
                raise DataError(f"{path}:{lineno}: expected 'source<TAB>target'")
            yield fields[0], fields[1]


def build_graph(assignment: AreaAssignment, links: Iterable[tuple[str, str]]) -> ArticleGraph:
    """Build the undirected article graph from title-level links.

    Only links between two assigned articles survive; everything else is
    dropped and tallied in the returned graph's ``link_stats``.
    """
    if not assignment.areas:
        raise DataError("assignment has no retained areas")

    # Area-major vertex numbering, members ordered by article id within an area.
    vertex_of: dict[str, int] = {}
    titles: list[str] = []
    area_idx: list[int] = []
    by_area: dict[str, list[int]] = {a: [] for a in assignment.areas}
    for art_id, area in assignment.area_of.items():
        by_area[area].append(art_id)
    for ai, area in enumerate(assignment.areas):
        for art_id in sorted(by_area[area]):
            title = assignment.titles[art_id]
            vertex_of[title] = len(titles)
            titles.append(title)
            area_idx.append(ai)

    stats = LinkStats()
    seen: set[tuple[int, int]] = set()
    for src, tgt in links:
        stats.read += 1
        u = vertex_of.get(src)
        v = vertex_of.get(tgt)
        if u is None or v is None:
            stats.dropped_unknown += 1
            continue
        if u == v:
            stats.dropped_self += 1
            continue
        pair = (u, v) if u < v else (v, u)
        if pair in seen:
            stats.duplicates += 1
            continue
        seen.add(pair)
    stats.kept = len(seen)

    edges = np.array(sorted(seen), dtype=np.int64).reshape(-1, 2)
    return ArticleGraph(
        assignment.areas, np.array(area_idx, dtype=np.int64), edges, titles, stats
    )


def edge_census(g: ArticleGraph) -> AreaCounts:
    """Exact per-area / per-pair edge counts of the full graph."""
    m = g.num_areas
    internal = np.zeros(m, dtype=np.int64)
    external = np.zeros((m, m), dtype=np.int64)
    if g.num_edges:
        pairs = g.edge_area_pairs()
        flat = pairs[:, 0] * m + pairs[:, 1]
        counts = np.bincount(flat, minlength=m * m).reshape(m, m)
        internal = np.diag(counts).copy()
        off = counts - np.diag(internal)
        external = off + off.T
    total = int(internal.sum() + np.triu(external, 1).sum())
    if total != g.num_edges:
        raise InvariantError(f"census total {total} != edge count {g.num_edges}")
    return AreaCounts(internal=internal, external=external)


# -- import/export -----------------------------------------------------------


def save_binary(g: ArticleGraph, path: str | Path) -> None:
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<I", g.num_areas))
        for name, count in zip(g.areas, g.area_sizes):
            raw = name.encode("utf-8")
            fh.write(struct.pack("<I", len(raw)) + raw + struct.pack("<I", int(count)))
        if g.titles is None:
            fh.write(struct.pack("<B", 0))
        else:
            fh.write(struct.pack("<B", 1))
            for title in g.titles:
                raw = title.encode("utf-8")
                fh.write(struct.pack("<I", len(raw)) + raw)
        fh.write(struct.pack("<Q", g.num_edges))
        fh.write(g.edges.astype("<u4").tobytes())


def load_binary(path: str | Path) -> ArticleGraph:
    with open(path, "rb") as fh:
        magic = fh.read(8)
        if magic[:6] != _MAGIC[:6]:
            raise DataError(f"{path}: not a knet graph file")
        if magic != _MAGIC:
            raise DataError(f"{path}: unsupported graph format version {magic[7]}")
        (n_areas,) = struct.unpack("<I", fh.read(4))
        areas: list[str] = []
        sizes: list[int] = []
        for _ in range(n_areas):
            (ln,) = struct.unpack("<I", fh.read(4))
            areas.append(fh.read(ln).decode("utf-8"))
            (count,) = struct.unpack("<I", fh.read(4))
            sizes.append(count)
        n = sum(sizes)
        (has_titles,) = struct.unpack("<B", fh.read(1))
        titles = None
        if has_titles:
            titles = []
            for _ in range(n):
                (ln,) = struct.unpack("<I", fh.read(4))
                titles.append(fh.read(ln).decode("utf-8"))
        (n_edges,) = struct.unpack("<Q", fh.read(8))
        edges = np.frombuffer(fh.read(8 * n_edges), dtype="<u4").astype(np.int64)
    area_of = np.repeat(np.arange(n_areas, dtype=np.int64), sizes)
    return ArticleGraph(areas, area_of, edges.reshape(-1, 2), titles)


def save_graphml(g: ArticleGraph, path: str | Path) -> None:
    """GraphML export with per-node title and area attributes."""
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<graphml xmlns="http://graphml.graphdrawing.org/xmlns">',
        '  <key id="d0" for="node" attr.name="title" attr.type="string"/>',
        '  <key id="d1" for="node" attr.name="area" attr.type="string"/>',
        '  <graph id="articles" edgedefault="undirected">',
    ]
    for v in range(g.n):
        title = g.titles[v] if g.titles is not None else str(v)
        area = g.areas[int(g.area_of[v])]
        lines.append(
            f'    <node id="n{v}"><data key="d0">{escape(title)}</data>'
            f'<data key="d1">{escape(area)}</data></node>'
        )
    for u, v in g.edges:
        lines.append(f'    <edge source="n{u}" target="n{v}"/>')
    lines += ["  </graph>", "</graphml>", ""]
    Path(path).write_text("\n".join(lines), encoding="utf-8")
