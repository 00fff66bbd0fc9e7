"""Cross-lane equivalence between the compiled and numpy kernels."""

import numpy as np
import pytest

from cohypo import kernels
from cohypo._rng import derive_seed
from cohypo.alias import build_alias
from cohypo.graph import DTGraph
from cohypo.sgns import SgnsConfig, train_sgns
from cohypo.walks import WalkConfig, generate_walks, precompute_transitions

needs_fast = pytest.mark.skipif(
    "fast" not in kernels.available_backends(),
    reason="compiled kernel lane not built",
)


@pytest.fixture
def graph():
    words = [f"n{i}" for i in range(12)]
    edges = [(i, (i + 1) % 12, (i % 4) + 1) for i in range(12)]
    edges += [(0, 6, 2), (3, 9, 5)]
    return DTGraph.from_edge_list(words, edges)


@needs_fast
def test_alias_streams_identical(rng):
    weights = rng.random(9) + 0.01
    prob, alias = build_alias(weights)
    py = kernels.get_backend("py").alias_sample_block(prob, alias, derive_seed(5), 5000)
    fast = kernels.get_backend("fast").alias_sample_block(prob, alias, derive_seed(5), 5000)
    np.testing.assert_array_equal(py, fast)


@needs_fast
def test_walks_bit_exact_across_lanes(graph, monkeypatch):
    import cohypo.walks as walks_mod

    table = precompute_transitions(graph, p=2.0, q=0.5)
    cfg = WalkConfig(walk_length=15, walks_per_node=4, p=2.0, q=0.5, seed=17)
    results = {}
    for lane in ("py", "fast"):
        monkeypatch.setattr(walks_mod.kernels, "generate_walks_block",
                            kernels.get_backend(lane).generate_walks_block)
        results[lane] = generate_walks(graph, table, cfg).walks
    np.testing.assert_array_equal(results["py"], results["fast"])


@needs_fast
def test_sgns_lanes_agree_closely(graph, monkeypatch):
    import cohypo.sgns as sgns_mod

    table = precompute_transitions(graph)
    corpus = generate_walks(graph, table, WalkConfig(walk_length=12, walks_per_node=3, seed=3))
    cfg = SgnsConfig(dim=16, window=4, negatives=3, epochs=2, seed=23)
    out = {}
    for lane in ("py", "fast"):
        monkeypatch.setattr(sgns_mod.kernels, "sgns_epoch",
                            kernels.get_backend(lane).sgns_epoch)
        out[lane] = train_sgns(corpus, cfg)
    np.testing.assert_allclose(out["py"].input_vectors, out["fast"].input_vectors,
                               rtol=1e-9, atol=1e-12)
    np.testing.assert_allclose(out["py"].context_vectors, out["fast"].context_vectors,
                               rtol=1e-9, atol=1e-12)
    np.testing.assert_allclose(out["py"].epoch_losses, out["fast"].epoch_losses,
                               rtol=1e-9)
