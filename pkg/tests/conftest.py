from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for the oracles helper module

import knet

TOY_DIR = Path(__file__).parent / "data" / "toy"
TABLE1 = Path(knet.__file__).parent / "data" / "table1.csv"

# Acceptance SBM fixture: 3 areas of 50, dense inside, sparse across.
SBM_FIXTURE = knet.SbmSpec(
    sizes=(50, 50, 50),
    p=((0.10, 0.02, 0.02), (0.02, 0.10, 0.02), (0.02, 0.02, 0.10)),
    seed=987654321,
    names=("alpha", "beta", "gamma"),
)


@pytest.fixture(scope="session")
def toy_dir() -> Path:
    return TOY_DIR


@pytest.fixture(scope="session")
def toy_config() -> dict:
    return json.loads((TOY_DIR / "config.json").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def toy_assignment(toy_config) -> knet.AreaAssignment:
    articles = knet.parse_articles(TOY_DIR / "articles.tsv")
    tree = knet.CategoryTree.from_tsv(TOY_DIR / "category_tree.tsv")
    catmap = knet.expand_categories(tree, toy_config["roots"], toy_config["depth"])
    return knet.assign_areas(articles, catmap, toy_config["sample"]["k"] + 1)


@pytest.fixture(scope="session")
def toy_graph(toy_assignment) -> knet.ArticleGraph:
    return knet.build_graph(toy_assignment, knet.read_links(TOY_DIR / "links.tsv"))


@pytest.fixture(scope="session")
def toy_network_raw(toy_graph, toy_config) -> knet.KnowledgeNetwork:
    sample = toy_config["sample"]
    cfg = knet.SampleConfig(sample["k"], sample["rounds"], sample["seed"], normalize=False)
    return knet.monte_carlo_estimate(toy_graph, cfg, threads=4)


@pytest.fixture(scope="session")
def sbm_graph() -> knet.ArticleGraph:
    return knet.generate_sbm(SBM_FIXTURE)


def random_area_graph(rng: np.random.Generator, sizes, p=0.4) -> knet.ArticleGraph:
    """Small random graph with the given area sizes (test helper)."""
    sizes = list(sizes)
    n = sum(sizes)
    area_of = np.repeat(np.arange(len(sizes)), sizes)
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = [pair for pair in pairs if rng.random() < p]
    return knet.ArticleGraph(
        [f"g{i}" for i in range(len(sizes))],
        area_of,
        np.array(edges, dtype=np.int64).reshape(-1, 2),
    )
