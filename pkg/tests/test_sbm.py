from __future__ import annotations

import numpy as np
import pytest
from scipy import stats

import knet
from knet.errors import DataError


def spec(sizes, p_in, p_out, seed, names=()):
    m = len(sizes)
    p = tuple(
        tuple(p_in if i == j else p_out for j in range(m)) for i in range(m)
    )
    return knet.SbmSpec(sizes=tuple(sizes), p=p, seed=seed, names=tuple(names))


class TestGenerate:
    def test_all_zero_probability_gives_empty_graph(self):
        g = knet.generate_sbm(spec([4, 4], 0.0, 0.0, seed=1))
        assert g.num_edges == 0

    def test_all_one_probability_gives_complete_graph(self):
        g = knet.generate_sbm(spec([3, 3], 1.0, 1.0, seed=1))
        assert g.num_edges == 15

    def test_deterministic_for_fixed_seed(self):
        a = knet.generate_sbm(spec([10, 10], 0.3, 0.1, seed=42))
        b = knet.generate_sbm(spec([10, 10], 0.3, 0.1, seed=42))
        assert np.array_equal(a.edges, b.edges)

    def test_mean_census_within_3_sigma(self):
        sizes = (50, 50, 50)
        p_in, p_out, n_seeds = 0.1, 0.02, 200
        internal = np.zeros(3)
        external = np.zeros(3)
        for seed in range(n_seeds):
            census = knet.edge_census(knet.generate_sbm(spec(sizes, p_in, p_out, seed)))
            internal += census.internal
            external += [census.external[0, 1], census.external[0, 2], census.external[1, 2]]
        pairs_in = sizes[0] * (sizes[0] - 1) / 2
        pairs_out = sizes[0] * sizes[1]
        se_in = np.sqrt(pairs_in * p_in * (1 - p_in) / n_seeds)
        se_out = np.sqrt(pairs_out * p_out * (1 - p_out) / n_seeds)
        assert np.abs(internal / n_seeds - p_in * pairs_in).max() <= 3 * se_in
        assert np.abs(external / n_seeds - p_out * pairs_out).max() <= 3 * se_out

    def test_chi_square_binomial_check(self):
        # within-block edge counts over many seeds vs Binomial(npairs, p)
        size, p, n_seeds = 30, 0.15, 300
        npairs = size * (size - 1) // 2
        counts = np.array([
            int(knet.edge_census(knet.generate_sbm(spec([size], p, 0.0, seed))).internal[0])
            for seed in range(n_seeds)
        ])
        quantiles = stats.binom.ppf(np.linspace(0, 1, 7)[1:-1], npairs, p)
        bins = np.concatenate([[-np.inf], quantiles, [np.inf]])
        observed, _ = np.histogram(counts, bins)
        cdf = stats.binom.cdf(bins[1:], npairs, p) - stats.binom.cdf(bins[:-1], npairs, p)
        result = stats.chisquare(observed, cdf * n_seeds)
        assert result.pvalue > 0.001

    def test_validation_errors(self):
        with pytest.raises(DataError, match=">= 2"):
            spec([1, 4], 0.1, 0.1, seed=0).validate()
        with pytest.raises(DataError, match="symmetric"):
            knet.SbmSpec(sizes=(3, 3), p=((0.1, 0.2), (0.3, 0.1)), seed=0).validate()
        with pytest.raises(DataError, match="\\[0, 1\\]"):
            spec([3, 3], 1.5, 0.1, seed=0).validate()


class TestCorpusRoundTrip:
    def test_written_corpus_reingests_to_the_same_graph(self, tmp_path):
        g = knet.generate_sbm(spec([8, 12, 6], 0.4, 0.1, seed=9, names=("x", "y", "z")))
        knet.write_corpus(g, tmp_path / "articles.tsv", tmp_path / "links.tsv")
        articles = knet.parse_articles(tmp_path / "articles.tsv")
        assignment = knet.assign_areas(articles, {"x": "x", "y": "y", "z": "z"}, 1)
        back = knet.build_graph(assignment, knet.read_links(tmp_path / "links.tsv"))
        assert back.areas == g.areas
        assert back.titles == g.titles
        assert np.array_equal(back.edges, g.edges)


class TestPipelineClosure:
    def test_normalized_weights_order_pairs_like_the_oracle(self):
        m = 4
        p = np.full((m, m), 0.02)
        np.fill_diagonal(p, 0.3)
        # distinct planted cross densities
        levels = {(0, 1): 0.12, (0, 2): 0.08, (1, 2): 0.05, (2, 3): 0.03}
        for (i, j), v in levels.items():
            p[i, j] = p[j, i] = v
        g_spec = knet.SbmSpec(
            sizes=(40, 40, 40, 40), p=tuple(map(tuple, p)), seed=77
        )
        g = knet.generate_sbm(g_spec)
        oracle = knet.exact_expectation(g, 8, normalize=True)
        est = knet.monte_carlo_estimate(
            g, knet.SampleConfig(k=8, rounds=4000, seed=3), threads=4
        )
        pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
        oracle_order = sorted(pairs, key=lambda ij: -oracle.edge_weight[ij])
        est_order = sorted(pairs, key=lambda ij: -est.edge_weight[ij])
        assert oracle_order == est_order
