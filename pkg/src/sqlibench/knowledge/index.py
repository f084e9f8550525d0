"""Exact flat cosine vector index with a diff-friendly text persistence format."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ..errors import DimensionError, EmptyInputError
from .chunking import Chunk
from .embedding import NORM_TOLERANCE, EmbeddingProvider


@dataclass(frozen=True)
class EmbeddedChunk:
    chunk: Chunk
    vector: np.ndarray


class VectorIndex:
    """Immutable-after-build list of embedded chunks searched exhaustively."""

    def __init__(self, entries: list[EmbeddedChunk], dimension: int):
        if not entries:
            raise EmptyInputError("index requires at least one entry")
        for e in entries:
            if e.vector.shape != (dimension,):
                raise DimensionError(
                    f"entry {e.chunk.id} has dimension {e.vector.shape[0]}, index wants {dimension}"
                )
            norm = float(np.linalg.norm(e.vector))
            if abs(norm - 1.0) > NORM_TOLERANCE:
                raise DimensionError(f"entry {e.chunk.id} is not unit-norm (|v|={norm})")
        self.entries = list(entries)
        self.dimension = dimension
        self._matrix = np.stack([e.vector for e in entries])

    def __len__(self) -> int:
        return len(self.entries)

    def similarities(self, query_vec: np.ndarray) -> np.ndarray:
        if query_vec.shape != (self.dimension,):
            raise DimensionError(
                f"query dimension {query_vec.shape[0]} != index dimension {self.dimension}"
            )
        return self._matrix @ query_vec


def build_index(chunks: list[Chunk], embedder: EmbeddingProvider) -> VectorIndex:
    """Embed every chunk in order and wrap the result in a VectorIndex."""
    if not chunks:
        raise EmptyInputError("no chunks to index")
    entries = [EmbeddedChunk(c, embedder.embed_text(c.text)) for c in chunks]
    return VectorIndex(entries, embedder.dimension)


def save_index(index: VectorIndex, path: str) -> None:
    """One record per line: id, source, offset, JSON-escaped text, vector.

    Vector components are written with 9 significant digits; a load/save
    round trip reproduces the file byte-exactly.
    """
    with open(path, "w", encoding="utf-8") as fh:
        for e in index.entries:
            vec = " ".join(format(x, ".9g") for x in e.vector)
            fh.write(
                f"{e.chunk.id}\t{json.dumps(e.chunk.source_doc)}\t{e.chunk.offset}\t"
                f"{json.dumps(e.chunk.text)}\t{vec}\n"
            )


def load_index(path: str) -> VectorIndex:
    entries: list[EmbeddedChunk] = []
    dimension = None
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            cid, source, offset, text, vec = line.rstrip("\n").split("\t")
            values = np.array([float(x) for x in vec.split(" ")], dtype=np.float64)
            values.setflags(write=False)
            if dimension is None:
                dimension = len(values)
            entries.append(
                EmbeddedChunk(
                    Chunk(int(cid), json.loads(text), json.loads(source), int(offset)),
                    values,
                )
            )
    if not entries:
        raise EmptyInputError(f"index file {path} is empty")
    return VectorIndex(entries, dimension)
