import numpy as np
import pytest
import scipy.stats

from cohypo import kernels
from cohypo._rng import derive_seed
from cohypo.alias import alias_to_probs, build_alias
from cohypo.errors import ContractError
from cohypo.graph import DTGraph
from cohypo.walks import WalkConfig, generate_walks, precompute_transitions


@pytest.fixture
def ten_node_graph():
    """Fixed weighted graph: a ring with chords and varied weights."""
    words = [f"n{i}" for i in range(10)]
    edges = [(i, (i + 1) % 10, (i % 3) + 1) for i in range(10)]
    edges += [(0, 5, 4), (2, 7, 2), (1, 6, 3)]
    return DTGraph.from_edge_list(words, edges)


@pytest.fixture
def bias_fixture():
    """t=0, v=1, x1=2 (adjacent to t), x2=3 (not adjacent to t), unit weights."""
    words = ["t", "v", "x1", "x2"]
    edges = [("t", "v", 1), ("v", "x1", 1), ("v", "x2", 1), ("t", "x1", 1)]
    return DTGraph.from_edge_list(words, edges)


def test_alias_reconstructs_distribution(rng):
    for size in (1, 2, 7, 40):
        weights = rng.random(size) + 0.01
        prob, alias = build_alias(weights)
        np.testing.assert_allclose(alias_to_probs(prob, alias),
                                   weights / weights.sum(), atol=1e-12)


def test_alias_sampling_fidelity(rng):
    # empirical frequencies over 1e5 draws within L1 0.01 of the exact categorical
    weights = rng.random(6) + 0.05
    prob, alias = build_alias(weights)
    for backend in kernels.available_backends():
        lane = kernels.get_backend(backend)
        draws = lane.alias_sample_block(prob, alias, derive_seed(99, backend), 100_000)
        freq = np.bincount(draws, minlength=6) / draws.size
        l1 = np.abs(freq - weights / weights.sum()).sum()
        assert l1 < 0.01, backend


def test_transition_tables_normalized(ten_node_graph):
    table = precompute_transitions(ten_node_graph, p=2.0, q=0.5)
    g = ten_node_graph
    for u in range(g.n_nodes):
        prob, alias = table.node_table(g, u)
        if prob.size:
            assert abs(alias_to_probs(prob, alias).sum() - 1.0) < 1e-12
    for slot in range(g.indices.size):
        prob, alias = table.edge_table(g, slot)
        assert abs(alias_to_probs(prob, alias).sum() - 1.0) < 1e-12


def test_p_q_one_reduces_to_first_order(ten_node_graph):
    g = ten_node_graph
    table = precompute_transitions(g, p=1.0, q=1.0)
    for slot in range(g.indices.size):
        head = int(g.indices[slot])
        _, ws = g.neighbors(head)
        expected = ws / ws.sum()
        prob, alias = table.edge_table(g, slot)
        np.testing.assert_allclose(alias_to_probs(prob, alias), expected, atol=1e-12)


def test_hand_derived_bias_distribution(bias_fixture):
    g = bias_fixture
    table = precompute_transitions(g, p=2.0, q=0.5)
    slot = table.edge_slot(g, g.word_id("t"), g.word_id("v"))
    prob, alias = table.edge_table(g, slot)
    probs = alias_to_probs(prob, alias)
    # v's neighbors ascending: t, x1, x2 -> (1/7, 2/7, 4/7)
    np.testing.assert_allclose(probs, [1 / 7, 2 / 7, 4 / 7], atol=1e-12)


def test_hand_derived_bias_empirical(bias_fixture):
    g = bias_fixture
    table = precompute_transitions(g, p=2.0, q=0.5)
    slot = table.edge_slot(g, g.word_id("t"), g.word_id("v"))
    prob, alias = table.edge_table(g, slot)
    draws = kernels.alias_sample_block(prob, alias, derive_seed(7), 100_000)
    freq = np.bincount(draws, minlength=3) / draws.size
    np.testing.assert_allclose(freq, [1 / 7, 2 / 7, 4 / 7], atol=0.01)


def test_star_graph_first_step_uniform():
    words = ["hub", "a", "b", "c"]
    g = DTGraph.from_edge_list(words, [("hub", x, 1) for x in "abc"])
    table = precompute_transitions(g)
    prob, alias = table.node_table(g, g.word_id("hub"))
    np.testing.assert_allclose(alias_to_probs(prob, alias), [1 / 3] * 3, atol=1e-12)


def test_chi_square_second_order_vs_first_order(ten_node_graph):
    # p=q=1: second-order samples are indistinguishable from weighted first-order
    g = ten_node_graph
    table = precompute_transitions(g, 1.0, 1.0)
    for u in range(g.n_nodes):
        ids, ws = g.neighbors(u)
        incoming = table.edge_slot(g, int(ids[0]), u)  # any in-edge targets u
        prob, alias = table.edge_table(g, incoming)
        draws = kernels.alias_sample_block(prob, alias, derive_seed(3, u), 10_000)
        observed = np.bincount(draws, minlength=ids.size)
        expected = ws / ws.sum() * draws.size
        result = scipy.stats.chisquare(observed, expected)
        assert result.pvalue >= 0.01, f"node {u}"


def test_two_node_walk_alternates():
    g = DTGraph.from_edge_list(["u", "v"], [("u", "v", 1)])
    table = precompute_transitions(g)
    corpus = generate_walks(g, table, WalkConfig(walk_length=8, walks_per_node=3, seed=1))
    assert corpus.walks.shape == (6, 8)
    for walk in corpus.walks:
        assert all(walk[i] != walk[i + 1] for i in range(7))
        assert set(walk.tolist()) == {0, 1}


def test_weighted_next_step_frequencies():
    # edges weighted 3 and 1 from the center: expect 0.75/0.25 within 0.02
    g = DTGraph.from_edge_list(["c", "a", "b"], [("c", "a", 3), ("c", "b", 1)])
    table = precompute_transitions(g)
    prob, alias = table.node_table(g, g.word_id("c"))
    draws = kernels.alias_sample_block(prob, alias, derive_seed(21), 10_000)
    freq = np.bincount(draws, minlength=2) / draws.size
    np.testing.assert_allclose(freq, [0.75, 0.25], atol=0.02)


def test_walk_corpus_shape_and_adjacency(ten_node_graph):
    g = ten_node_graph
    table = precompute_transitions(g)
    cfg = WalkConfig(walk_length=20, walks_per_node=4, seed=5)
    corpus = generate_walks(g, table, cfg)
    assert corpus.n_walks == 4 * g.non_isolated().size
    assert corpus.isolated_nodes.size == 0
    starts = np.sort(corpus.walks[:, 0])
    np.testing.assert_array_equal(starts, np.repeat(np.arange(10), 4))
    for walk in corpus.walks[:20]:
        for a, b in zip(walk[:-1], walk[1:]):
            assert g.edge_weight(int(a), int(b)) > 0


def test_isolated_nodes_reported():
    g = DTGraph.from_edge_list(["a", "b", "solo"], [("a", "b", 1)])
    table = precompute_transitions(g)
    corpus = generate_walks(g, table, WalkConfig(walk_length=4, walks_per_node=2, seed=0))
    assert corpus.isolated_nodes.tolist() == [g.word_id("solo")]
    assert corpus.n_walks == 4


def test_fixed_seed_identical_corpus(ten_node_graph):
    g = ten_node_graph
    table = precompute_transitions(g)
    cfg = WalkConfig(walk_length=16, walks_per_node=3, seed=42)
    c1 = generate_walks(g, table, cfg)
    c2 = generate_walks(g, table, cfg)
    np.testing.assert_array_equal(c1.walks, c2.walks)
    c3 = generate_walks(g, table, WalkConfig(walk_length=16, walks_per_node=3, seed=43))
    assert not np.array_equal(c1.walks, c3.walks)


def test_threaded_walks_match_serial(ten_node_graph):
    g = ten_node_graph
    table = precompute_transitions(g)
    cfg = WalkConfig(walk_length=12, walks_per_node=5, seed=9)
    serial = generate_walks(g, table, cfg, threads=1)
    threaded = generate_walks(g, table, cfg, threads=4)
    np.testing.assert_array_equal(serial.walks, threaded.walks)


def test_graph_table_mismatch_rejected(ten_node_graph):
    other = DTGraph.from_edge_list(["a", "b"], [("a", "b", 1)])
    table = precompute_transitions(other)
    with pytest.raises(ContractError):
        generate_walks(ten_node_graph, table, WalkConfig(seed=0))


def test_config_contracts():
    with pytest.raises(ContractError):
        WalkConfig(walk_length=1)
    with pytest.raises(ContractError):
        WalkConfig(walks_per_node=0)
    with pytest.raises(ContractError):
        WalkConfig(p=0.0)
    with pytest.raises(ContractError):
        WalkConfig(q=-1.0)


def test_transitions_need_an_edge():
    g = DTGraph.from_edge_list(["a", "b"], [])
    with pytest.raises(ContractError):
        precompute_transitions(g)
