"""Embedding providers.

Every provider maps non-empty text to a unit-norm vector of a fixed
dimension. The default provider hashes character 3-grams into 256 buckets,
which is deterministic across platforms and needs no model download; real
sentence-embedding backends plug in behind the same interface.
"""

from __future__ import annotations

import hashlib
from typing import Protocol

import numpy as np

from ..errors import EmptyInputError

NORM_TOLERANCE = 1e-6


class EmbeddingProvider(Protocol):
    dimension: int

    def embed_text(self, text: str) -> np.ndarray: ...


def _bucket(gram: str, buckets: int) -> int:
    digest = hashlib.blake2b(gram.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big") % buckets


class HashedNgramEmbedder:
    """Deterministic 256-dim embedder over hashed character 3-grams.

    Texts shorter than 3 characters are hashed whole so every non-empty
    input still produces a nonzero vector.
    """

    def __init__(self, dimension: int = 256):
        self.dimension = dimension
        self._cache: dict[str, np.ndarray] = {}

    def grams(self, text: str) -> list[str]:
        if len(text) < 3:
            return [text]
        return [text[i : i + 3] for i in range(len(text) - 2)]

    def buckets(self, text: str) -> set[int]:
        return {_bucket(g, self.dimension) for g in self.grams(text)}

    def embed_text(self, text: str) -> np.ndarray:
        if not text:
            raise EmptyInputError("cannot embed empty text")
        cached = self._cache.get(text)
        if cached is not None:
            return cached
        vec = np.zeros(self.dimension, dtype=np.float64)
        for g in self.grams(text):
            vec[_bucket(g, self.dimension)] += 1.0
        vec /= np.linalg.norm(vec)
        vec.setflags(write=False)
        self._cache[text] = vec
        return vec


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """Dot product of two already unit-norm vectors."""
    return float(np.dot(u, v))
