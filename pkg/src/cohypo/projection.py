"""2-D principal-component projection of selected embedding rows."""

import numpy as np

_SIGN_TOL = 1e-12


def project_2d(emb, words):
    """Project the given words onto their top-2 principal components.

    Rows are mean-centered first; each component's sign is fixed so its first
    non-negligible loading is positive. Returns [(word, x, y), ...].
    """
    rows = np.stack([emb.vector(w) for w in words])
    centered = rows - rows.mean(axis=0)
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    comps = vt[:2]
    if comps.shape[0] < 2:
        comps = np.vstack([comps, np.zeros((2 - comps.shape[0], comps.shape[1]))])
    for k in range(2):
        nz = np.nonzero(np.abs(comps[k]) > _SIGN_TOL)[0]
        if nz.size and comps[k, nz[0]] < 0:
            comps[k] = -comps[k]
    coords = centered @ comps.T
    return [(word, float(x), float(y)) for word, (x, y) in zip(words, coords)]


def write_projection_tsv(points, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("word\tx\ty\n")
        for word, x, y in points:
            fh.write(f"{word}\t{x:.10g}\t{y:.10g}\n")
