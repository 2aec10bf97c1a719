"""Tests for digraphs, mixing matrices and spectral constants."""

import numpy as np
import pytest

from etdgt_experiments.core.errors import InvalidGraph, NonConvergence
from etdgt_experiments.core.network import (
    DiGraph,
    build_col_stochastic,
    build_network,
    build_row_stochastic,
    check_spanning_trees,
    contraction_factor,
    eigenbasis_condition,
    perron_vector,
)


def test_digraph_rejects_bad_edges():
    """Self-loops, duplicates and out-of-range endpoints are invalid."""
    with pytest.raises(InvalidGraph):
        DiGraph.from_edges(3, [(0, 0)])
    with pytest.raises(InvalidGraph):
        DiGraph.from_edges(3, [(0, 1), (0, 1)])
    with pytest.raises(InvalidGraph):
        DiGraph.from_edges(3, [(0, 3)])
    with pytest.raises(InvalidGraph):
        DiGraph(n=0)


def test_digraph_neighbors_and_degrees():
    graph = DiGraph.from_edges(3, [(1, 0), (2, 0), (2, 1)])
    assert graph.in_neighbors(2) == (0, 1)
    assert graph.out_neighbors(0) == (1, 2)
    assert graph.out_degrees().tolist() == [2, 1, 0]
    assert graph.transpose().edges == ((0, 1), (0, 2), (1, 2))


def test_mixing_matrices_are_stochastic(case1):
    """R rows and C columns sum to one with a positive diagonal."""
    R = build_row_stochastic(case1.graph_R)
    C = build_col_stochastic(case1.graph_C)
    np.testing.assert_allclose(R.sum(axis=1), 1.0, atol=1e-12)
    np.testing.assert_allclose(C.sum(axis=0), 1.0, atol=1e-12)
    assert np.all(np.diag(R) > 0) and np.all(np.diag(C) > 0)
    assert np.all(R >= 0) and np.all(C >= 0)


def test_perron_vectors_are_fixed_points(case1_network):
    net = case1_network
    assert net.pi_R.sum() == pytest.approx(1.0)
    assert net.pi_C.sum() == pytest.approx(1.0)
    assert np.all(net.pi_R >= 0) and np.all(net.pi_C >= 0)
    np.testing.assert_allclose(net.pi_R @ net.R, net.pi_R, atol=1e-10)
    np.testing.assert_allclose(net.C @ net.pi_C, net.pi_C, atol=1e-10)


def test_perron_vector_reports_stall(case1_network):
    """One power step cannot reach the residual target on an irregular graph."""
    with pytest.raises(NonConvergence):
        perron_vector(case1_network.R, side="left", max_iter=1)


def test_perron_vector_rejects_side():
    with pytest.raises(ValueError):
        perron_vector(np.eye(2), side="up")


def test_contraction_factors_below_one(case1_network):
    net = case1_network
    assert 0.0 < net.sigma_R < 1.0
    assert 0.0 < net.sigma_C < 1.0
    assert net.sigma_R == pytest.approx(
        contraction_factor(net.R, net.pi_R, side="left"), rel=1e-12
    )
    assert eigenbasis_condition(net.R, net.pi_R, side="left") >= 1.0
    assert net.delta_RC == net.delta_CR >= 1.0


def test_spanning_tree_check():
    """A star fanning out of agent 0 has a pull root but no common root."""
    star = DiGraph.from_edges(3, [(1, 0), (2, 0)])
    report = check_spanning_trees(star, star)
    assert not report.ok

    ring = DiGraph.from_edges(3, [(1, 0), (2, 1), (0, 2)])
    report = check_spanning_trees(ring, ring)
    assert report.ok
    assert report.roots == frozenset({0, 1, 2})


def test_build_network_defaults_push_graph(small):
    net = build_network(small.graph_R)
    assert net.graph_C == small.graph_R
    assert net.n == 3
    np.testing.assert_allclose(net.R_shift, net.R - np.eye(3))
    assert 0.0 < net.pi_dot <= 1.0
    assert net.summary()["edges_R"] == 4


def random_strong_digraph(seed: int) -> DiGraph:
    """Directed cycle over a random permutation plus random chords."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 16))
    order = rng.permutation(n)
    edges = {(int(order[(k + 1) % n]), int(order[k])) for k in range(n)}
    for _ in range(int(rng.integers(0, 2 * n))):
        i, j = (int(v) for v in rng.integers(0, n, size=2))
        if i != j:
            edges.add((i, j))
    return DiGraph.from_edges(n, sorted(edges))


@pytest.mark.parametrize("seed", range(100))
def test_contraction_below_one_on_random_digraphs(seed):
    graph = random_strong_digraph(seed)
    R = build_row_stochastic(graph)
    C = build_col_stochastic(graph)
    assert contraction_factor(R, perron_vector(R, side="left"), side="left") < 1.0
    assert contraction_factor(C, perron_vector(C, side="right"), side="right") < 1.0


@pytest.mark.parametrize("power", [1, 2, 5])
def test_deflated_powers(case1_network, power):
    """(R - 1 pi^T)^k = R^k - 1 pi^T, and the deflation kills 1 and pi."""
    net = case1_network
    ones = np.ones(net.n)
    deflated = net.R - np.outer(ones, net.pi_R)
    np.testing.assert_allclose(
        np.linalg.matrix_power(deflated, power),
        np.linalg.matrix_power(net.R, power) - np.outer(ones, net.pi_R),
        atol=1e-9,
    )
    np.testing.assert_allclose(deflated @ ones, 0.0, atol=1e-12)
    np.testing.assert_allclose(net.pi_R @ deflated, 0.0, atol=1e-9)


@pytest.mark.parametrize("seed", range(10))
@pytest.mark.parametrize("side", ["left", "right"])
def test_perron_vector_matches_dense_eig(seed, side):
    graph = random_strong_digraph(seed)
    if side == "left":
        M = build_row_stochastic(graph)
        values, vectors = np.linalg.eig(M.T)
    else:
        M = build_col_stochastic(graph)
        values, vectors = np.linalg.eig(M)
    dense = np.real(vectors[:, np.argmin(np.abs(values - 1.0))])
    dense = dense / dense.sum()
    np.testing.assert_allclose(perron_vector(M, side=side), dense, atol=1e-8)


@pytest.mark.parametrize("build", [build_row_stochastic, build_col_stochastic])
def test_single_node_weights(build):
    np.testing.assert_array_equal(build(DiGraph(n=1)), [[1.0]])


@pytest.mark.parametrize("build", [build_row_stochastic, build_col_stochastic])
def test_ring_weights_split_evenly(build):
    ring = DiGraph.from_edges(3, [(1, 0), (2, 1), (0, 2)])
    expected = np.array([[0.5, 0.0, 0.5], [0.5, 0.5, 0.0], [0.0, 0.5, 0.5]])
    np.testing.assert_allclose(build(ring), expected)
