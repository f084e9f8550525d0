"""Knowledge base: chunking, embedding, indexing, and MMR retrieval."""

from .chunking import Chunk, chunk_document
from .embedding import HashedNgramEmbedder, cosine
from .index import EmbeddedChunk, VectorIndex, build_index, load_index, save_index
from .mmr import RetrievalParams, mmr_retrieve

__all__ = [
    "Chunk",
    "EmbeddedChunk",
    "HashedNgramEmbedder",
    "RetrievalParams",
    "VectorIndex",
    "build_index",
    "chunk_document",
    "cosine",
    "load_index",
    "mmr_retrieve",
    "save_index",
]
