"""Six post-hoc diversity metrics, the aggregate report, and the runtime filter."""

from .metrics import (
    ast_diversity,
    contextual_similarity,
    functional_diversity,
    gram_set,
    lexical_diversity,
    ngram_diversity,
    pair_f1,
    passes_filter,
    payload_tree,
    semantic_diversity,
    tokenize,
)
from .report import (
    AGGREGATE_METRICS,
    DiversityReport,
    PayloadDiversityDetail,
    aggregate,
    score_payload_set,
)

__all__ = [
    "AGGREGATE_METRICS",
    "DiversityReport",
    "PayloadDiversityDetail",
    "aggregate",
    "ast_diversity",
    "contextual_similarity",
    "functional_diversity",
    "gram_set",
    "lexical_diversity",
    "ngram_diversity",
    "pair_f1",
    "passes_filter",
    "payload_tree",
    "score_payload_set",
    "semantic_diversity",
    "tokenize",
]
