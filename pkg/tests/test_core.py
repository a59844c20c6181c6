import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hsbm.core import (EdgeClass, Hypergraph, ModelParams, PartitionVector, classify_edge,
                       derive_probabilities, sample_binomial, sample_hypergraph,
                       sample_partition)
from hsbm.errors import InvalidParams, OutOfRange
from hsbm.rng import mix_seed, splitmix64, substream

from conftest import planted

SIX = PartitionVector([1, 1, 1, -1, -1, -1])


def test_zero_rates():
    assert derive_probabilities(4, 2, 0, 0) == (0.0, 0.0)


def test_probability_formula_against_exact_binomial():
    # big-integer C(99, 1) from a product formula, not math.comb
    comb = Fraction(1)
    for i in range(1):
        comb *= Fraction(99 - i, i + 1)
    p, q = derive_probabilities(100, 2, 1, 1)
    assert p == pytest.approx(math.log(100) / float(comb), rel=1e-15)
    assert p == q


def test_rate_hitting_one():
    p, q = derive_probabilities(10, 3, math.comb(9, 2) / math.log(10), 0)
    assert p == 1.0 and q == 0.0


def test_out_of_range_and_shape_errors():
    with pytest.raises(OutOfRange):
        derive_probabilities(10, 3, 100, 0)
    with pytest.raises(InvalidParams):
        derive_probabilities(9, 3, 1, 1)
    with pytest.raises(InvalidParams):
        derive_probabilities(10, 1, 1, 1)
    with pytest.raises(InvalidParams):
        derive_probabilities(10, 6, 1, 1)


def test_from_probabilities_exact():
    params = ModelParams.from_probabilities(20, 3, 1.0, 0.0)
    assert (params.p, params.q) == (1.0, 0.0)


@pytest.mark.parametrize("e,expected", [((1, 2, 3), EdgeClass.IN_CLUSTER),
                                        ((1, 2, 4), EdgeClass.CROSS_CLUSTER),
                                        ((5, 6), EdgeClass.IN_CLUSTER)])
def test_classify_edge(e, expected):
    assert classify_edge(e, SIX) is expected
    assert classify_edge(e, -SIX) is expected


@pytest.mark.parametrize("n,k", [(6, 2), (8, 3), (10, 3), (12, 4), (12, 5)])
def test_class_counts_by_enumeration(n, k):
    sigma = planted(n)
    n_in = sum(classify_edge(e, sigma) is EdgeClass.IN_CLUSTER
               for e in itertools.combinations(range(1, n + 1), k))
    params = ModelParams(n, k, 0, 0)
    assert n_in == params.n_in_cluster_sets == 2 * math.comb(n // 2, k)
    assert params.n_cross_cluster_sets == math.comb(n, k) - n_in


def test_partition_validation():
    with pytest.raises(InvalidParams):
        PartitionVector([1, 1, -1])
    with pytest.raises(InvalidParams):
        PartitionVector([1, 0])
    with pytest.raises(InvalidParams):
        sample_partition(7, 0)


def test_hypergraph_validation():
    assert Hypergraph(4, 2, frozenset({(2, 1)})).edges == {(1, 2)}
    with pytest.raises(InvalidParams):
        Hypergraph(4, 2, frozenset({(1, 1)}))
    with pytest.raises(InvalidParams):
        Hypergraph(4, 2, frozenset({(1, 2), (2, 1)}))
    with pytest.raises(InvalidParams):
        Hypergraph(4, 2, frozenset({(1, 5)}))
    with pytest.raises(InvalidParams):
        Hypergraph(4, 3, frozenset({(1, 2)}))


def test_partition_n2_both_outcomes():
    seen = {sample_partition(2, s).as_tuple() for s in range(64)}
    assert seen == {(1, -1), (-1, 1)}


def test_partition_deterministic():
    assert sample_partition(100, 42) == sample_partition(100, 42)
    assert sample_partition(100, 42) != sample_partition(100, 43)


def test_partition_uniform_coordinates():
    X = np.array([sample_partition(1000, s).labels for s in range(10_000)])
    assert np.max(np.abs(X.mean(axis=0))) <= 4 / math.sqrt(10_000) * 1.5
    # per-coordinate means are approximately N(0, 1/10^4); 4 sigma per coordinate
    assert np.mean(np.abs(X.mean(axis=0)) > 4 / 100) < 0.001


def test_degenerate_probabilities():
    sigma = sample_partition(12, 1)
    full = sample_hypergraph(ModelParams.from_probabilities(12, 3, 1.0, 0.0), sigma, 1)
    assert len(full) == 2 * math.comb(6, 3)
    assert all(classify_edge(e, sigma) is EdgeClass.IN_CLUSTER for e in full.edges)
    empty = sample_hypergraph(ModelParams(12, 3, 0, 0), sigma, 1)
    assert len(empty) == 0


def test_edge_count_mean():
    params = ModelParams(20, 3, 2, 2)
    sigma = planted(20)
    counts = np.array([len(sample_hypergraph(params, sigma, s)) for s in range(1000)])
    N = math.comb(20, 3)
    mean = N * params.p
    sd = math.sqrt(N * params.p * (1 - params.p))
    assert abs(counts.mean() - mean) <= 5 * sd / math.sqrt(1000)


@pytest.mark.parametrize("n,k,p,q", [(6, 2, 0.3, 0.1), (8, 3, 0.25, 0.4)])
def test_inclusion_frequencies(n, k, p, q):
    params = ModelParams.from_probabilities(n, k, p, q)
    sigma = planted(n)
    sets = list(itertools.combinations(range(1, n + 1), k))
    index = {e: i for i, e in enumerate(sets)}
    reps = 100_000
    hits = np.zeros(len(sets))
    for s in range(reps):
        for e in sample_hypergraph(params, sigma, s).edges:
            hits[index[e]] += 1
    for e, h in zip(sets, hits):
        prob = p if classify_edge(e, sigma) is EdgeClass.IN_CLUSTER else q
        se = math.sqrt(prob * (1 - prob) / reps)
        assert abs(h / reps - prob) <= 5 * se, e


def test_sparse_path_distinct_and_classified():
    params = ModelParams(200, 4, 20, 5)
    sigma = sample_partition(200, 3)
    H = sample_hypergraph(params, sigma, 3)
    n_in = sum(classify_edge(e, sigma) is EdgeClass.IN_CLUSTER for e in H.edges)
    assert 0 < n_in < len(H)
    assert len(set(H.edges)) == len(H)


def test_binomial_sampler_moments():
    rng = np.random.default_rng(0)
    trials, p = 10**13, 3e-12
    draws = np.array([sample_binomial(rng, trials, p) for _ in range(20_000)])
    assert abs(draws.mean() - trials * p) < 5 * math.sqrt(trials * p / 20_000)
    assert abs(draws.var() / (trials * p) - 1) < 0.05


def test_binomial_sampler_exact_law_small():
    from scipy.stats import binom
    rng = np.random.default_rng(1)
    draws = np.array([sample_binomial(rng, 12, 0.35) for _ in range(50_000)])
    freq = np.bincount(draws, minlength=13) / draws.size
    pmf = binom.pmf(np.arange(13), 12, 0.35)
    assert np.all(np.abs(freq - pmf) <= 5 * np.sqrt(pmf * (1 - pmf) / draws.size) + 1e-12)


def test_sampler_deterministic():
    params = ModelParams(60, 3, 10, 2)
    sigma = sample_partition(60, 9)
    assert sample_hypergraph(params, sigma, 9).edges == sample_hypergraph(params, sigma, 9).edges


def test_seed_mixing():
    assert mix_seed(1, 2, 3) != mix_seed(3, 2, 1)
    assert mix_seed(0, 0, 0, 0) == mix_seed(0, 0, 0, 0)
    # published splitmix64 output for state 0 after one step
    assert splitmix64(0) == 0xE220A8397B1DCDAF
    a = substream(5, "x").random(4)
    b = substream(5, "y").random(4)
    assert not np.allclose(a, b)


@given(st.lists(st.sampled_from([1, -1]), min_size=2, max_size=20))
def test_sign_flip_classification(labels):
    labels = labels + [-v for v in labels]
    sigma = PartitionVector(labels)
    n = sigma.n
    for e in itertools.islice(itertools.combinations(range(1, n + 1), 3), 50):
        assert classify_edge(e, sigma) is classify_edge(e, -sigma)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**63), st.sampled_from([(8, 2), (10, 3), (12, 4)]))
def test_hypergraph_edges_valid(seed, shape):
    n, k = shape
    params = ModelParams.from_probabilities(n, k, 0.5, 0.2)
    H = sample_hypergraph(params, sample_partition(n, seed), seed)
    for e in H.edges:
        assert len(e) == k and list(e) == sorted(set(e)) and 1 <= e[0] and e[-1] <= n
