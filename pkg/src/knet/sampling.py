"""Normalization of area sizes by repeated fixed-k sampling and collapse.

One round draws k vertices uniformly without replacement from every area
(independently across areas) and counts the edges induced by the draw: edges
inside an area accumulate into that area's node weight, edges between two
areas into the pair's edge weight.  Averaging many rounds estimates the
expected collapsed network; optional normalization divides node weights and
edge weights by their separate totals, which makes the result independent of
k in expectation.

Determinism contract: the generator for round i is PCG64 seeded with the
first 64-bit word of ``SeedSequence(master_seed, spawn_key=(i,))``.  Round
counts are integers and are accumulated in int64, so the average is exact and
bit-identical for any worker count or scheduling order.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .graph import AreaCounts, ArticleGraph, edge_census
from .network import KnowledgeNetwork

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class SampleConfig:
    k: int
    rounds: int
    seed: int
    normalize: bool = True

    def validate(self) -> None:
        if self.k < 1:
            raise DataError(f"k must be >= 1, got {self.k}")
        if self.rounds < 1:
            raise DataError(f"rounds must be >= 1, got {self.rounds}")


def round_seed(master_seed: int, round_index: int) -> int:
    """64-bit seed for one round's private generator stream."""
    ss = np.random.SeedSequence(master_seed & _MASK64, spawn_key=(round_index,))
    return int(ss.generate_state(1, np.uint64)[0])


def _check_k(g: ArticleGraph, k: int) -> None:
    if k < 1:
        raise DataError(f"k must be >= 1, got {k}")
    small = int(np.argmin(g.area_sizes))
    if k >= g.area_sizes[small]:
        raise DataError(
            f"k={k} is not smaller than area {g.areas[small]!r} (size {int(g.area_sizes[small])})"
        )


def _edge_classes(g: ArticleGraph) -> tuple[np.ndarray, int]:
    """Map each edge to a flat class id: area a -> a, pair (a<b) -> m + condensed(a, b)."""
    m = g.num_areas
    n_classes = m + m * (m - 1) // 2
    if g.num_edges == 0:
        return np.zeros(0, dtype=np.int64), n_classes
    pairs = g.edge_area_pairs()
    lo, hi = pairs[:, 0], pairs[:, 1]
    condensed = lo * m - lo * (lo + 1) // 2 + (hi - lo - 1)
    return np.where(lo == hi, lo, m + condensed).astype(np.int64), n_classes


def _split_classes(vec: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
    internal = vec[:m].copy()
    external = np.zeros((m, m), dtype=vec.dtype)
    iu = np.triu_indices(m, 1)
    external[iu] = vec[m:]
    return internal, external + external.T


def draw_sample(g: ArticleGraph, k: int | None, seed: int) -> list[np.ndarray]:
    """One round's vertex draw: k members per area, or all members if k is None."""
    if k is None:
        return list(g.area_members)
    rng = np.random.default_rng(seed & _MASK64)
    return [rng.choice(members, size=k, replace=False) for members in g.area_members]


def sample_round(g: ArticleGraph, k: int | None, seed: int) -> AreaCounts:
    """Counts induced by a single sampling round.

    ``k=None`` is the degenerate full-draw override: every area contributes
    all of its vertices and the counts equal the exact edge census.
    """
    if k is not None:
        _check_k(g, k)
    cls, n_classes = _edge_classes(g)
    counts = _induced_counts(g, draw_sample(g, k, seed), cls, n_classes)
    internal, external = _split_classes(counts, g.num_areas)
    return AreaCounts(internal=internal, external=external)


def _induced_counts(
    g: ArticleGraph, sample: list[np.ndarray], cls: np.ndarray, n_classes: int
) -> np.ndarray:
    mask = np.zeros(g.n, dtype=bool)
    for chosen in sample:
        mask[chosen] = True
    if g.num_edges == 0:
        return np.zeros(n_classes, dtype=np.int64)
    sel = mask[g.edges[:, 0]] & mask[g.edges[:, 1]]
    return np.bincount(cls[sel], minlength=n_classes)


def _accumulate(g, k, master_seed, rounds_range, cls, n_classes):
    tot = np.zeros(n_classes, dtype=np.int64)
    sq = np.zeros(n_classes, dtype=np.int64)
    for i in rounds_range:
        counts = _induced_counts(g, draw_sample(g, k, round_seed(master_seed, i)), cls, n_classes)
        tot += counts
        sq += counts * counts
    return tot, sq


def monte_carlo_estimate(
    g: ArticleGraph, cfg: SampleConfig, threads: int = 1
) -> KnowledgeNetwork:
    """Average of ``cfg.rounds`` sampling rounds, optionally normalized.

    For unnormalized output the per-weight standard errors of the mean are
    attached as ``node_se`` / ``edge_se``.
    """
    cfg.validate()
    _check_k(g, cfg.k)
    cls, n_classes = _edge_classes(g)

    if threads <= 1:
        tot, sq = _accumulate(g, cfg.k, cfg.seed, range(cfg.rounds), cls, n_classes)
    else:
        bounds = np.linspace(0, cfg.rounds, threads + 1).astype(int)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(
                pool.map(
                    lambda se: _accumulate(g, cfg.k, cfg.seed, range(se[0], se[1]), cls, n_classes),
                    zip(bounds[:-1], bounds[1:]),
                )
            )
        tot = np.sum([p[0] for p in parts], axis=0)
        sq = np.sum([p[1] for p in parts], axis=0)

    r = cfg.rounds
    mean = tot / r
    node_se = edge_se = None
    if r > 1:
        var = (sq - tot * tot / r) / (r - 1)
        se = np.sqrt(np.maximum(var, 0.0) / r)
        node_se, edge_se = _split_classes(se, g.num_areas)
    internal, external = _split_classes(mean, g.num_areas)
    meta = {"k": cfg.k, "rounds": cfg.rounds, "seed": cfg.seed, "normalized": cfg.normalize,
            "estimator": "monte_carlo"}
    return _finalize(g, internal, external, cfg.normalize, meta, node_se, edge_se)


def exact_expectation(g: ArticleGraph, k: int, normalize: bool = True) -> KnowledgeNetwork:
    """Closed-form expected value of the sampling estimator as rounds -> inf.

    An edge internal to area a survives a round with probability
    k(k-1) / (n_a (n_a - 1)); an edge between areas a and b with probability
    (k/n_a)(k/n_b).  Expectations are these probabilities times the census.
    """
    _check_k(g, k)
    census = edge_census(g)
    sizes = g.area_sizes.astype(np.float64)
    p_internal = (k * (k - 1)) / (sizes * (sizes - 1))
    internal = census.internal * p_internal
    inclusion = k / sizes
    external = census.external * np.outer(inclusion, inclusion)
    meta = {"k": k, "rounds": None, "seed": None, "normalized": normalize,
            "estimator": "exact"}
    return _finalize(g, internal, external, normalize, meta)


def _finalize(g, internal, external, normalize, meta, node_se=None, edge_se=None):
    if normalize:
        node_total = internal.sum()
        edge_total = np.triu(external, 1).sum()
        if node_total <= 0:
            raise DataError("total node weight is zero; cannot normalize (degenerate corpus)")
        if edge_total <= 0:
            raise DataError("total edge weight is zero; cannot normalize (degenerate corpus)")
        internal = internal / node_total
        external = external / edge_total
        node_se = edge_se = None
    return KnowledgeNetwork(
        list(g.areas), internal, np.asarray(external, dtype=np.float64), normalize, meta,
        node_se, edge_se,
    )
