"""Planted-partition (stochastic block model) article graphs for validation.

Every vertex pair is an independent Bernoulli draw: probability P[a][a]
within area a, P[a][b] between areas a and b.  Generation is exact (no
expected-degree shortcuts) so realized counts are binomial by construction.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DataError
from .graph import ArticleGraph

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class SbmSpec:
    sizes: tuple[int, ...]
    p: tuple[tuple[float, ...], ...]  # symmetric (m, m) probability matrix
    seed: int
    names: tuple[str, ...] = ()

    def validate(self) -> None:
        m = len(self.sizes)
        if m == 0:
            raise DataError("sbm spec needs at least one area")
        if any(s < 2 for s in self.sizes):
            raise DataError("every area size must be >= 2")
        p = np.asarray(self.p, dtype=np.float64)
        if p.shape != (m, m):
            raise DataError(f"probability matrix must be {m}x{m}")
        if (p < 0).any() or (p > 1).any():
            raise DataError("probabilities must lie in [0, 1]")
        if not np.array_equal(p, p.T):
            raise DataError("probability matrix must be symmetric")
        if self.names and len(self.names) != m:
            raise DataError("names length must match sizes")

    def area_names(self) -> list[str]:
        if self.names:
            return list(self.names)
        return [f"area{i + 1}" for i in range(len(self.sizes))]

    @classmethod
    def from_json_dict(cls, obj: dict) -> "SbmSpec":
        try:
            spec = cls(
                sizes=tuple(int(s) for s in obj["sizes"]),
                p=tuple(tuple(float(x) for x in row) for row in obj["p"]),
                seed=int(obj["seed"]),
                names=tuple(obj.get("names", ())),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise DataError(f"bad sbm spec: {exc}") from None
        spec.validate()
        return spec

    @classmethod
    def load(cls, path: str | Path) -> "SbmSpec":
        try:
            obj = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise DataError(f"{path}: invalid JSON ({exc.msg})") from None
        return cls.from_json_dict(obj)


def generate_sbm(spec: SbmSpec) -> ArticleGraph:
    """Sample one graph; deterministic for a fixed spec (blocks are drawn in
    (i, j) order with i <= j, so the random stream layout is stable)."""
    spec.validate()
    rng = np.random.default_rng(spec.seed & _MASK64)
    names = spec.area_names()
    sizes = np.array(spec.sizes, dtype=np.int64)
    p = np.asarray(spec.p, dtype=np.float64)
    offsets = np.concatenate([[0], np.cumsum(sizes)])
    m = len(sizes)

    chunks = []
    for i in range(m):
        iu = np.triu_indices(sizes[i], k=1)
        hit = rng.random(iu[0].shape[0]) < p[i, i]
        chunks.append(
            np.column_stack((iu[0][hit] + offsets[i], iu[1][hit] + offsets[i]))
        )
        for j in range(i + 1, m):
            grid = rng.random((sizes[i], sizes[j])) < p[i, j]
            ii, jj = np.nonzero(grid)
            chunks.append(np.column_stack((ii + offsets[i], jj + offsets[j])))

    edges = np.concatenate(chunks) if chunks else np.zeros((0, 2), dtype=np.int64)
    area_of = np.repeat(np.arange(m, dtype=np.int64), sizes)
    titles = [f"{names[a]}-{v - offsets[a]:04d}" for v, a in enumerate(area_of)]
    return ArticleGraph(names, area_of, edges, titles)


def write_corpus(g: ArticleGraph, articles_path: str | Path, links_path: str | Path) -> None:
    """Emit the graph in the TSV article/link formats the ingester reads.

    Each article's single category is its area name, so re-ingesting with the
    identity category map reproduces the graph exactly.
    """
    if g.titles is None:
        raise DataError("graph has no titles; cannot emit a corpus")
    with open(articles_path, "w", encoding="utf-8") as fh:
        for v in range(g.n):
            fh.write(f"{g.titles[v]}\t{g.areas[int(g.area_of[v])]}\n")
    with open(links_path, "w", encoding="utf-8") as fh:
        for u, v in g.edges:
            fh.write(f"{g.titles[int(u)]}\t{g.titles[int(v)]}\n")
