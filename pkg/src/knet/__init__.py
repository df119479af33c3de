"""knet: area-level knowledge networks from category-labeled link corpora."""

from .corpus import (
    AreaAssignment,
    Article,
    CategoryTree,
    assign_areas,
    expand_categories,
    parse_articles,
)
from .errors import ConfigError, DataError, InvariantError, KnetError
from .graph import (
    AreaCounts,
    ArticleGraph,
    LinkStats,
    build_graph,
    edge_census,
    load_binary,
    read_links,
    save_binary,
    save_graphml,
)
from .metrics import (
    Backbone,
    MetricsReport,
    backbone_mst,
    external_shares,
    internal_external_proportions,
)
from .network import KnowledgeNetwork
from .review import (
    AgreementReport,
    Hypergraph,
    ReviewTable,
    build_hypergraph,
    compare_with_network,
    parse_review_table,
)
from .sampling import (
    SampleConfig,
    draw_sample,
    exact_expectation,
    monte_carlo_estimate,
    round_seed,
    sample_round,
)
from .sbm import SbmSpec, generate_sbm, write_corpus

__version__ = "0.1.0"

__all__ = [
    "AgreementReport",
    "AreaAssignment",
    "AreaCounts",
    "Article",
    "ArticleGraph",
    "Backbone",
    "CategoryTree",
    "ConfigError",
    "DataError",
    "Hypergraph",
    "InvariantError",
    "KnetError",
    "KnowledgeNetwork",
    "LinkStats",
    "MetricsReport",
    "ReviewTable",
    "SampleConfig",
    "SbmSpec",
    "assign_areas",
    "backbone_mst",
    "build_graph",
    "build_hypergraph",
    "compare_with_network",
    "draw_sample",
    "edge_census",
    "exact_expectation",
    "expand_categories",
    "external_shares",
    "generate_sbm",
    "internal_external_proportions",
    "load_binary",
    "monte_carlo_estimate",
    "parse_articles",
    "parse_review_table",
    "read_links",
    "round_seed",
    "sample_round",
    "save_binary",
    "save_graphml",
    "write_corpus",
    "__version__",
]
