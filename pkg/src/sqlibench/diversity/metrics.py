"""Pairwise diversity metrics.

Every metric compares a new payload against an accepted set and returns a
value in [0, 1], where 0 means indistinguishable and 1 maximally diverse.
The empty-set convention is maximal diversity (and zero similarity for the
contextual F1), so a first payload always passes the runtime filter.
"""

from __future__ import annotations

import re

import numpy as np

from ..errors import EmptyInputError
from ..evaluation.classify import FunctionalSignature
from ..evaluation.sqlparser import SqlParseError, parse_sql, token_tree
from ..kernels import FlatTree, flat_tree_distance, flatten, levenshtein
from ..knowledge.embedding import EmbeddingProvider, HashedNgramEmbedder

NGRAM_SIZES = (2, 3, 4)

_TOKENIZE_RE = re.compile(
    r"[a-z0-9_$@.]+|<=>|<=|>=|<>|!=|\|\||&&|--|/\*|\*/|[='\"`<>(),;+\-*/%#!~]"
)


def semantic_diversity(
    p_new: str, accepted: list[str], embedder: EmbeddingProvider
) -> float:
    """Min over the set of 1 - cos(emb(p_new), emb(p)), clamped to [0, 1]."""
    if not accepted:
        return 1.0
    if p_new in accepted:  # cos(v, v) is exactly 1 in the mathematics, not in floats
        return 0.0
    new_vec = embedder.embed_text(p_new)
    worst = min(1.0 - float(np.dot(new_vec, embedder.embed_text(p))) for p in accepted)
    return min(max(worst, 0.0), 1.0)


def lexical_diversity(p_new: str, accepted: list[str]) -> float:
    """Min over the set of normalized Levenshtein distance."""
    if not accepted:
        return 1.0
    return min(
        levenshtein(p_new, p) / max(len(p_new), len(p), 1) for p in accepted
    )


def gram_set(text: str) -> frozenset[str]:
    """Union of character 2-, 3-, and 4-gram sets."""
    grams: set[str] = set()
    for size in NGRAM_SIZES:
        grams.update(text[i : i + size] for i in range(len(text) - size + 1))
    return frozenset(grams)


def ngram_diversity(p_new: str, accepted: list[str]) -> float:
    """Min over the set of Jaccard distance between combined gram sets."""
    if not accepted:
        return 1.0
    new_grams = gram_set(p_new)
    best = 1.0
    for p in accepted:
        other = gram_set(p)
        union = len(new_grams | other)
        if union == 0:  # both too short for any gram: identical by convention
            distance = 0.0
        else:
            distance = 1.0 - len(new_grams & other) / union
        if distance < best:
            best = distance
    return best


def tokenize(text: str) -> list[str]:
    """Lowercase split on whitespace/SQL punctuation, operators kept as tokens."""
    return _TOKENIZE_RE.findall(text.lower())


def _token_matrix(text: str, embedder: EmbeddingProvider) -> np.ndarray | None:
    tokens = tokenize(text)
    if not tokens:
        return None
    return np.stack([embedder.embed_text(t) for t in tokens])


def pair_f1(a: str, b: str, embedder: EmbeddingProvider) -> float:
    """Greedy token-matching F1 between two payloads."""
    mat_a = _token_matrix(a, embedder)
    mat_b = _token_matrix(b, embedder)
    if mat_a is None and mat_b is None:
        return 1.0
    if mat_a is None or mat_b is None:
        return 0.0
    sims = mat_a @ mat_b.T
    precision = float(sims.max(axis=1).mean())
    recall = float(sims.max(axis=0).mean())
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def contextual_similarity(
    p_new: str, accepted: list[str], embedder: EmbeddingProvider
) -> tuple[float, float]:
    """(max F1 over the set, 1 - max F1); empty set gives (0, 1)."""
    if not accepted:
        return 0.0, 1.0
    max_f1 = max(pair_f1(p_new, p, embedder) for p in accepted)
    max_f1 = min(max(max_f1, 0.0), 1.0)
    return max_f1, 1.0 - max_f1


def payload_tree(text: str) -> FlatTree:
    """Parse a payload standalone; unparseable input degrades to a token tree."""
    try:
        root = parse_sql(text)
    except SqlParseError:
        root = token_tree(text)
    return flatten(root, lambda n: n.children, lambda n: n.label)


def ast_diversity(p_new: str, accepted: list[str]) -> float:
    """Min over the set of tree edit distance / max node count."""
    if not accepted:
        return 1.0
    new_tree = payload_tree(p_new)
    best = 1.0
    for p in accepted:
        other = payload_tree(p)
        distance = flat_tree_distance(new_tree, other)
        value = distance / max(new_tree.size, other.size)
        value = min(max(value, 0.0), 1.0)
        if value < best:
            best = value
    return best


def functional_diversity(signatures: list[FunctionalSignature]) -> float:
    """Share of distinct functional signatures in the set."""
    if not signatures:
        raise EmptyInputError("functional diversity needs at least one signature")
    return len(set(signatures)) / len(signatures)


def passes_filter(
    p_new: str,
    accepted: list[str],
    theta: float,
    embedder: EmbeddingProvider | None = None,
) -> tuple[bool, dict[str, float]]:
    """Runtime acceptance gate: semantic > theta, lexical > theta, F1 < theta.

    Returns the decision plus each gate's value for the acceptance log.
    """
    embedder = embedder or HashedNgramEmbedder()
    semantic = semantic_diversity(p_new, accepted, embedder)
    lexical = lexical_diversity(p_new, accepted)
    max_f1, _ = contextual_similarity(p_new, accepted, embedder)
    gates = {"semantic": semantic, "lexical": lexical, "contextual_f1": max_f1}
    passed = semantic > theta and lexical > theta and max_f1 < theta
    return passed, gates
