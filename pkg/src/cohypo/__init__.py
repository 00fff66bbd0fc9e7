"""Co-hyponymy detection over distributional-thesaurus graph embeddings.

Pipeline stages: count ingestion -> feature rankings -> similarity graph ->
biased random walks -> skip-gram embeddings -> pair composition ->
classification and cross-validated evaluation.
"""

__version__ = "0.1.0"

from cohypo.counts import CountTable, association_score, ingest_counts
from cohypo.graph import DTGraph, build_dt_graph
from cohypo.rankings import ContextFeatureTable, build_feature_rankings, overlap_similarity

__all__ = [
    "CountTable",
    "ContextFeatureTable",
    "DTGraph",
    "association_score",
    "build_dt_graph",
    "build_feature_rankings",
    "ingest_counts",
    "overlap_similarity",
    "__version__",
]
