"""Set-level diversity scoring and the aggregate report.

Set scores use the streaming nearest-neighbor definition: payload i is
compared against payloads 0..i-1 in generation order, exactly the view the
runtime filter has, and the per-metric score is the mean over payloads (the
first payload contributes the empty-set convention values). Pair values are
memoized by text pair, which matters a lot for low-uniqueness sets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import EmptyInputError
from ..evaluation.classify import FunctionalSignature
from ..knowledge.embedding import EmbeddingProvider, HashedNgramEmbedder
from ..kernels import flat_tree_distance, levenshtein
from .metrics import (
    functional_diversity,
    gram_set,
    pair_f1,
    payload_tree,
)

AGGREGATE_METRICS = ("semantic", "lexical", "contextual", "ngram", "ast", "functional")


@dataclass(frozen=True)
class DiversityReport:
    uniqueness_pct: float
    semantic: float
    lexical: float
    contextual: float
    ngram: float
    ast: float
    functional: float
    total: float


@dataclass(frozen=True)
class PayloadDiversityDetail:
    index: int
    semantic: float
    lexical: float
    contextual: float
    ngram: float
    ast: float


def aggregate(
    semantic: float,
    lexical: float,
    contextual: float,
    ngram: float,
    ast: float,
    functional: float,
    uniqueness_pct: float,
) -> DiversityReport:
    total = (semantic + lexical + contextual + ngram + ast + functional) / 6.0
    return DiversityReport(
        uniqueness_pct, semantic, lexical, contextual, ngram, ast, functional, total
    )


class _PairCache:
    """Memoizes pairwise metric values keyed by the two payload texts."""

    def __init__(self, embedder: EmbeddingProvider):
        self.embedder = embedder
        self._vectors: dict[str, np.ndarray] = {}
        self._grams: dict[str, frozenset] = {}
        self._trees: dict[str, object] = {}
        self._semantic: dict[tuple[str, str], float] = {}
        self._lexical: dict[tuple[str, str], float] = {}
        self._ngram: dict[tuple[str, str], float] = {}
        self._f1: dict[tuple[str, str], float] = {}
        self._ast: dict[tuple[str, str], float] = {}

    def _key(self, a: str, b: str) -> tuple[str, str]:
        return (a, b) if a <= b else (b, a)

    def vector(self, text: str) -> np.ndarray:
        vec = self._vectors.get(text)
        if vec is None:
            vec = self.embedder.embed_text(text)
            self._vectors[text] = vec
        return vec

    def semantic(self, a: str, b: str) -> float:
        if a == b:
            return 0.0
        key = self._key(a, b)
        value = self._semantic.get(key)
        if value is None:
            value = 1.0 - float(np.dot(self.vector(a), self.vector(b)))
            value = min(max(value, 0.0), 1.0)
            self._semantic[key] = value
        return value

    def lexical(self, a: str, b: str) -> float:
        key = self._key(a, b)
        value = self._lexical.get(key)
        if value is None:
            value = levenshtein(a, b) / max(len(a), len(b), 1)
            self._lexical[key] = value
        return value

    def ngram(self, a: str, b: str) -> float:
        key = self._key(a, b)
        value = self._ngram.get(key)
        if value is None:
            ga = self._grams.get(a)
            if ga is None:
                ga = gram_set(a)
                self._grams[a] = ga
            gb = self._grams.get(b)
            if gb is None:
                gb = gram_set(b)
                self._grams[b] = gb
            union = len(ga | gb)
            value = 0.0 if union == 0 else 1.0 - len(ga & gb) / union
            self._ngram[key] = value
        return value

    def f1(self, a: str, b: str) -> float:
        key = self._key(a, b)
        value = self._f1.get(key)
        if value is None:
            value = pair_f1(a, b, self.embedder)
            self._f1[key] = value
        return value

    def ast(self, a: str, b: str) -> float:
        key = self._key(a, b)
        value = self._ast.get(key)
        if value is None:
            ta = self._trees.get(a)
            if ta is None:
                ta = payload_tree(a)
                self._trees[a] = ta
            tb = self._trees.get(b)
            if tb is None:
                tb = payload_tree(b)
                self._trees[b] = tb
            value = flat_tree_distance(ta, tb) / max(ta.size, tb.size)
            value = min(max(value, 0.0), 1.0)
            self._ast[key] = value
        return value


def score_payload_set(
    texts: list[str],
    signatures: list[FunctionalSignature],
    embedder: EmbeddingProvider | None = None,
) -> tuple[DiversityReport, list[PayloadDiversityDetail]]:
    """Streaming nearest-neighbor diversity report for a payload set."""
    if not texts:
        raise EmptyInputError("cannot score an empty payload set")
    if len(signatures) != len(texts):
        raise EmptyInputError(
            f"need one signature per payload ({len(signatures)} != {len(texts)})"
        )
    cache = _PairCache(embedder or HashedNgramEmbedder())

    details: list[PayloadDiversityDetail] = []
    seen: list[str] = []
    for i, text in enumerate(texts):
        prior = texts[:i]
        if not prior:
            details.append(PayloadDiversityDetail(i, 1.0, 1.0, 1.0, 1.0, 1.0))
        else:
            unique_prior = list(dict.fromkeys(prior))
            details.append(
                PayloadDiversityDetail(
                    i,
                    min(cache.semantic(text, p) for p in unique_prior),
                    min(cache.lexical(text, p) for p in unique_prior),
                    1.0 - max(cache.f1(text, p) for p in unique_prior),
                    min(cache.ngram(text, p) for p in unique_prior),
                    min(cache.ast(text, p) for p in unique_prior),
                )
            )
        seen.append(text)

    n = len(texts)
    report = aggregate(
        semantic=sum(d.semantic for d in details) / n,
        lexical=sum(d.lexical for d in details) / n,
        contextual=sum(d.contextual for d in details) / n,
        ngram=sum(d.ngram for d in details) / n,
        ast=sum(d.ast for d in details) / n,
        functional=functional_diversity(signatures),
        uniqueness_pct=100.0 * len(set(texts)) / n,
    )
    return report, details
