from __future__ import annotations

import numpy as np
import pytest

import knet
from knet.errors import DataError

import oracles
from conftest import random_area_graph


def two_area_graph(edges, sizes=(4, 4)):
    area_of = np.repeat(np.arange(len(sizes)), sizes)
    return knet.ArticleGraph(
        [f"g{i}" for i in range(len(sizes))], area_of, np.array(edges).reshape(-1, 2)
    )


def assert_matches_enumeration(g: knet.ArticleGraph, k: int, tol=1e-12):
    """exact_expectation against full enumeration of all per-area k-subsets."""
    net = knet.exact_expectation(g, k, normalize=False)
    members = [m.tolist() for m in g.area_members]
    internal, external = oracles.enumerate_expectation(members, g.edges.tolist(), k)
    for a in range(g.num_areas):
        assert abs(net.node_weight[a] - internal[a]) <= tol
        for b in range(a + 1, g.num_areas):
            assert abs(net.edge_weight[a, b] - external.get((a, b), 0.0)) <= tol


class TestExactExpectation:
    def test_single_external_edge(self):
        # one edge across two areas of 4: inclusion probability (2/4)(2/4)
        g = two_area_graph([[0, 4]])
        net = knet.exact_expectation(g, 2, normalize=False)
        assert net.edge_weight[0, 1] == pytest.approx(0.25, abs=1e-15)
        assert_matches_enumeration(g, 2)

    def test_single_internal_edge(self):
        # one edge inside an area of 4: 2*1 / (4*3)
        g = two_area_graph([[0, 1]])
        net = knet.exact_expectation(g, 2, normalize=False)
        assert net.node_weight[0] == pytest.approx(1.0 / 6.0, abs=1e-15)
        assert_matches_enumeration(g, 2)

    def test_k1_internal_expectations_vanish(self):
        g = two_area_graph([[0, 1], [0, 4], [4, 5]])
        net = knet.exact_expectation(g, 1, normalize=False)
        assert (net.node_weight == 0).all()
        assert net.edge_weight[0, 1] > 0

    def test_randomized_against_enumeration(self):
        rng = np.random.default_rng(42)
        for _ in range(30):
            m = int(rng.integers(1, 4))
            sizes = rng.integers(2, 7, size=m)
            while sizes.sum() > 12:
                sizes = rng.integers(2, 7, size=m)
            k = int(rng.integers(1, min(int(sizes.min()), 4)))
            g = random_area_graph(rng, sizes.tolist(), p=0.4)
            assert_matches_enumeration(g, k)

    def test_conservation_of_node_weight_total(self, sbm_graph):
        k = 5
        census = knet.edge_census(sbm_graph)
        sizes = sbm_graph.area_sizes.astype(float)
        expected = (census.internal * k * (k - 1) / (sizes * (sizes - 1))).sum()
        net = knet.exact_expectation(sbm_graph, k, normalize=False)
        assert net.node_weight.sum() == pytest.approx(expected, rel=1e-12)

    def test_k_too_large_names_area(self):
        g = two_area_graph([[0, 4]], sizes=(4, 3))
        with pytest.raises(DataError, match="g1"):
            knet.exact_expectation(g, 3)


class TestSampleRound:
    def test_full_draw_override_equals_census(self, toy_graph, sbm_graph):
        rng = np.random.default_rng(5)
        graphs = [toy_graph, sbm_graph, random_area_graph(rng, [5, 7, 4], p=0.3)]
        for g in graphs:
            counts = knet.sample_round(g, None, seed=123)
            census = knet.edge_census(g)
            assert np.array_equal(counts.internal, census.internal)
            assert np.array_equal(counts.external, census.external)

    def test_no_external_edges_means_zero_pair_counts(self):
        g = two_area_graph([[0, 1], [4, 5], [5, 6]])
        for seed in range(20):
            counts = knet.sample_round(g, 2, seed)
            assert counts.external.sum() == 0

    def test_counts_match_independent_recount(self):
        g = two_area_graph([[0, 1], [1, 2], [0, 4], [1, 5], [4, 5], [6, 7]])
        for seed in (0, 1, 99):
            sample = knet.draw_sample(g, 2, seed)
            counts = knet.sample_round(g, 2, seed)
            chosen = set(np.concatenate(sample).tolist())
            induced = [e for e in g.edges.tolist() if e[0] in chosen and e[1] in chosen]
            internal, external = oracles.classify_edges(g.area_of, induced)
            assert counts.internal.tolist() == [internal.get(0, 0), internal.get(1, 0)]
            assert counts.external[0, 1] == external.get((0, 1), 0)

    def test_deterministic_given_seed(self, sbm_graph):
        a = knet.sample_round(sbm_graph, 10, 777)
        b = knet.sample_round(sbm_graph, 10, 777)
        assert np.array_equal(a.internal, b.internal)
        assert np.array_equal(a.external, b.external)

    def test_k_at_area_size_rejected_without_override(self):
        g = two_area_graph([[0, 4]])
        with pytest.raises(DataError, match="not smaller"):
            knet.sample_round(g, 4, 0)


class TestMonteCarlo:
    def test_r1_equals_single_round(self, sbm_graph):
        cfg = knet.SampleConfig(k=5, rounds=1, seed=31, normalize=False)
        est = knet.monte_carlo_estimate(sbm_graph, cfg)
        counts = knet.sample_round(sbm_graph, 5, knet.round_seed(31, 0))
        assert np.array_equal(est.node_weight, counts.internal.astype(float))
        assert np.array_equal(est.edge_weight, counts.external.astype(float))

    def test_thread_count_does_not_change_bits(self, sbm_graph):
        cfg = knet.SampleConfig(k=8, rounds=400, seed=9, normalize=True)
        nets = [knet.monte_carlo_estimate(sbm_graph, cfg, threads=t) for t in (1, 2, 5)]
        for other in nets[1:]:
            assert np.array_equal(nets[0].node_weight, other.node_weight)
            assert np.array_equal(nets[0].edge_weight, other.edge_weight)

    def test_converges_to_exact_within_3se(self, sbm_graph):
        exact = knet.exact_expectation(sbm_graph, 10, normalize=False)
        cfg = knet.SampleConfig(k=10, rounds=2000, seed=1, normalize=False)
        est = knet.monte_carlo_estimate(sbm_graph, cfg)
        m = est.num_areas
        for a in range(m):
            assert abs(est.node_weight[a] - exact.node_weight[a]) <= 3 * est.node_se[a]
            for b in range(a + 1, m):
                assert (
                    abs(est.edge_weight[a, b] - exact.edge_weight[a, b])
                    <= 3 * est.edge_se[a, b]
                )

    def test_error_shrinks_like_inverse_sqrt_rounds(self, sbm_graph):
        exact = knet.exact_expectation(sbm_graph, 10, normalize=False)

        def max_dev(rounds):
            cfg = knet.SampleConfig(k=10, rounds=rounds, seed=17, normalize=False)
            est = knet.monte_carlo_estimate(sbm_graph, cfg, threads=4)
            return max(
                np.abs(est.node_weight - exact.node_weight).max(),
                np.abs(est.edge_weight - exact.edge_weight).max(),
            )

        # 100x the rounds should shave the deviation by roughly 10x; allow 2x slack
        assert max_dev(10000) < 0.5 * max_dev(100)

    def test_normalized_sums_to_one(self, sbm_graph):
        cfg = knet.SampleConfig(k=5, rounds=50, seed=3, normalize=True)
        net = knet.monte_carlo_estimate(sbm_graph, cfg)
        assert net.node_weight.sum() == pytest.approx(1.0, abs=1e-9)
        assert np.triu(net.edge_weight, 1).sum() == pytest.approx(1.0, abs=1e-9)

    def test_zero_total_weight_rejected_when_normalizing(self):
        g = two_area_graph([[0, 4]])  # no internal edges at all
        cfg = knet.SampleConfig(k=2, rounds=10, seed=0, normalize=True)
        with pytest.raises(DataError, match="degenerate"):
            knet.monte_carlo_estimate(g, cfg)

    def test_config_validation(self):
        with pytest.raises(DataError):
            knet.SampleConfig(k=0, rounds=1, seed=0).validate()
        with pytest.raises(DataError):
            knet.SampleConfig(k=2, rounds=0, seed=0).validate()


class TestKInvariance:
    def test_exact_normalized_identical_across_k(self, sbm_graph):
        nets = [knet.exact_expectation(sbm_graph, k, normalize=True) for k in (2, 3, 4)]
        for other in nets[1:]:
            assert np.abs(nets[0].node_weight - other.node_weight).max() <= 1e-12
            assert np.abs(nets[0].edge_weight - other.edge_weight).max() <= 1e-12

    def test_monte_carlo_agrees_across_k_within_noise(self, sbm_graph):
        nets = [
            knet.monte_carlo_estimate(
                sbm_graph, knet.SampleConfig(k=k, rounds=4000, seed=11), threads=4
            )
            for k in (2, 3, 4)
        ]
        # k=2 rounds see ~0.1 internal edges per area per round, so the
        # normalized estimates carry a few percent of noise at 4000 rounds
        for other in nets[1:]:
            assert np.abs(nets[0].node_weight - other.node_weight).max() < 0.05
            assert np.abs(nets[0].edge_weight - other.edge_weight).max() < 0.05
