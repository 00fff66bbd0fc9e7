import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "det", derandomize=True, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("det")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def make_count_records(rng, n_words=8, n_features=12, density=0.5, max_count=50):
    """Random synthetic count records with guaranteed coverage of every word."""
    words = [f"w{i:02d}" for i in range(n_words)]
    feats = [f"f{j:02d}" for j in range(n_features)]
    records = []
    for w in words:
        picked = rng.choice(n_features, size=max(1, int(density * n_features)),
                            replace=False)
        for j in picked:
            records.append((w, feats[j], int(rng.integers(1, max_count))))
    return records


@pytest.fixture
def small_counts(rng):
    from cohypo.counts import ingest_counts

    return ingest_counts(make_count_records(rng))
