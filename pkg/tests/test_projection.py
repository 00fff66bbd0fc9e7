import numpy as np
import pytest

from cohypo.errors import UnknownWordError
from cohypo.projection import project_2d, write_projection_tsv
from cohypo.sgns import EmbeddingMatrix


def make_emb(vectors, words=None):
    vectors = np.asarray(vectors, dtype=np.float64)
    words = words or [f"w{i}" for i in range(vectors.shape[0])]
    return EmbeddingMatrix(words, vectors, np.zeros_like(vectors))


def pairwise_distances(points):
    pts = np.asarray(points)
    return np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=-1)


def test_two_points_line_distance_preserved(rng):
    emb = make_emb(rng.normal(size=(2, 16)))
    points = project_2d(emb, emb.words)
    coords = np.array([[x, y] for _, x, y in points])
    assert np.allclose(coords[:, 1], 0.0, atol=1e-9)  # one dimension suffices
    original = np.linalg.norm(emb.input_vectors[0] - emb.input_vectors[1])
    projected = np.linalg.norm(coords[0] - coords[1])
    assert projected == pytest.approx(original, abs=1e-9)


def test_centered_2d_data_recovered(rng):
    flat = rng.normal(size=(10, 2))
    flat -= flat.mean(axis=0)
    # plant the 2-D data inside a 16-dim space via a random rotation
    basis, _ = np.linalg.qr(rng.normal(size=(16, 2)))
    emb = make_emb(flat @ basis.T)
    points = project_2d(emb, emb.words)
    coords = np.array([[x, y] for _, x, y in points])
    np.testing.assert_allclose(pairwise_distances(coords), pairwise_distances(flat),
                               atol=1e-9)


def test_reconstruction_error_matches_eigendecomposition_oracle(rng):
    X = rng.normal(size=(10, 128))
    emb = make_emb(X)
    points = project_2d(emb, emb.words)
    coords = np.array([[x, y] for _, x, y in points])
    centered = X - X.mean(axis=0)
    reconstruction_error = (centered ** 2).sum() - (coords ** 2).sum()

    # oracle: eigendecomposition of the covariance matrix
    eigvals = np.linalg.eigvalsh(centered.T @ centered)
    expected = eigvals[:-2].sum()
    assert reconstruction_error == pytest.approx(expected, rel=1e-9, abs=1e-9)


def test_deterministic_sign_convention(rng):
    X = rng.normal(size=(6, 8))
    emb = make_emb(X)
    a = project_2d(emb, emb.words)
    b = project_2d(emb, emb.words)
    assert a == b


def test_unknown_word_rejected(rng):
    emb = make_emb(rng.normal(size=(3, 4)))
    with pytest.raises(UnknownWordError):
        project_2d(emb, ["w0", "nope"])


def test_tsv_output(tmp_path, rng):
    emb = make_emb(rng.normal(size=(3, 4)))
    points = project_2d(emb, emb.words)
    out = tmp_path / "proj.tsv"
    write_projection_tsv(points, out)
    lines = out.read_text().splitlines()
    assert lines[0] == "word\tx\ty"
    assert len(lines) == 4
