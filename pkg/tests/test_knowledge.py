from __future__ import annotations

import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sqlibench.errors import (
    DimensionError,
    EmptyInputError,
    InvalidParamsError,
)
from sqlibench.knowledge import (
    Chunk,
    HashedNgramEmbedder,
    RetrievalParams,
    VectorIndex,
    build_index,
    chunk_document,
    load_index,
    mmr_retrieve,
    save_index,
)
from sqlibench.knowledge.index import EmbeddedChunk

from .oracles import mmr_oracle


class TestChunking:
    def test_stride_offsets_500_identical_chars(self):
        chunks = chunk_document("a" * 500, 200, 50)
        assert [c.offset for c in chunks] == [0, 150, 300, 450]
        assert len(chunks[-1].text) == 50
        assert all(len(c.text) <= 200 for c in chunks)

    def test_single_window(self):
        chunks = chunk_document("x" * 200, 200, 50)
        assert len(chunks) == 1
        assert chunks[0].text == "x" * 200

    def test_newline_break(self):
        text = "a" * 180 + "\n" + "b" * 219
        chunks = chunk_document(text, 200, 50)
        assert chunks[0].text == "a" * 180  # ends at the newline, exclusive

    def test_every_char_covered(self):
        rng = random.Random(5)
        for _ in range(50):
            n = rng.randint(1, 900)
            text = "".join(rng.choice("ab\ncd ") for _ in range(n))
            chunks = chunk_document(text, 120, 30)
            covered = set()
            for c in chunks:
                covered.update(range(c.offset, c.offset + len(c.text)))
            assert covered == set(range(n))

    def test_ids_sequential(self):
        chunks = chunk_document("z" * 1000, 200, 50)
        assert [c.id for c in chunks] == list(range(len(chunks)))

    def test_errors(self):
        with pytest.raises(EmptyInputError):
            chunk_document("", 200, 50)
        with pytest.raises(InvalidParamsError):
            chunk_document("abc", 50, 50)
        with pytest.raises(InvalidParamsError):
            chunk_document("abc", 10, -1)

    @given(st.text(alphabet="xy", min_size=1, max_size=700),
           st.integers(20, 100), st.integers(0, 19))
    @settings(max_examples=150)
    def test_reconstruction_without_separator_breaks(self, text, size, overlap):
        # no newlines in the alphabet, so no separator break can fire
        chunks = chunk_document(text, size, overlap)
        rebuilt = chunks[0].text
        for prev, cur in zip(chunks, chunks[1:]):
            rebuilt += cur.text[prev.offset + len(prev.text) - cur.offset:]
        assert rebuilt == text


class TestEmbedding:
    def test_deterministic(self, embedder):
        v1 = embedder.embed_text("' OR 1=1-- -")
        v2 = HashedNgramEmbedder().embed_text("' OR 1=1-- -")
        assert np.array_equal(v1, v2)

    def test_unit_norm(self, embedder):
        for text in ("a", "ab", "abc", "' UNION SELECT NULL-- -", "x" * 500):
            assert abs(np.linalg.norm(embedder.embed_text(text)) - 1.0) < 1e-9

    def test_identical_input_cosine_one(self, embedder):
        v = embedder.embed_text("abc")
        assert abs(float(np.dot(v, v)) - 1.0) < 1e-9

    def test_disjoint_gram_buckets_give_cosine_zero(self, embedder):
        # bucket sets verified disjoint first, then orthogonality must be exact
        a, b = "aaaa", "zzzz"
        assert embedder.buckets(a).isdisjoint(embedder.buckets(b))
        assert float(np.dot(embedder.embed_text(a), embedder.embed_text(b))) == 0.0

    def test_empty_text_rejected(self, embedder):
        with pytest.raises(EmptyInputError):
            embedder.embed_text("")


class TestIndex:
    def test_build_preserves_order_and_fields(self, embedder):
        chunks = [
            Chunk(0, "tautology OR 1=1", "doc-a", 0),
            Chunk(1, "union select extraction", "doc-b", 0),
            Chunk(2, "tautology OR 1=1", "doc-a", 150),
        ]
        index = build_index(chunks, embedder)
        assert len(index) == 3
        assert [e.chunk.id for e in index.entries] == [0, 1, 2]
        assert [e.chunk.source_doc for e in index.entries] == ["doc-a", "doc-b", "doc-a"]
        assert np.array_equal(index.entries[0].vector, index.entries[2].vector)

    def test_all_vectors_unit_norm(self, embedder):
        chunks = [Chunk(i, f"chunk text {i}", "d", i) for i in range(20)]
        index = build_index(chunks, embedder)
        norms = np.linalg.norm(index._matrix, axis=1)
        assert np.all(np.abs(norms - 1.0) < 1e-6)

    def test_empty_rejected(self, embedder):
        with pytest.raises(EmptyInputError):
            build_index([], embedder)

    def test_dimension_mismatch_rejected(self, embedder):
        good = EmbeddedChunk(Chunk(0, "x", "d", 0), embedder.embed_text("x"))
        bad_vec = np.zeros(8)
        bad_vec[0] = 1.0
        bad = EmbeddedChunk(Chunk(1, "y", "d", 0), bad_vec)
        with pytest.raises(DimensionError):
            VectorIndex([good, bad], embedder.dimension)

    def test_save_load_round_trip(self, embedder, tmp_path):
        text = "multi\nline chunk with\ttabs and 'quotes'"
        chunks = [Chunk(0, text, "doc with spaces", 0), Chunk(1, "plain", "d2", 150)]
        index = build_index(chunks, embedder)
        path = tmp_path / "index.txt"
        save_index(index, str(path))
        loaded = load_index(str(path))
        assert [e.chunk.text for e in loaded.entries] == [text, "plain"]
        assert loaded.dimension == index.dimension
        # the decimal file is canonical: a second save is byte-identical
        path2 = tmp_path / "index2.txt"
        save_index(loaded, str(path2))
        assert path.read_bytes() == path2.read_bytes()


def _random_index(rng, size, dim, embed_dim_entries=None):
    vectors = []
    for _ in range(size):
        if vectors and rng.random() < 0.2:
            vectors.append(vectors[rng.randrange(len(vectors))].copy())  # force ties
        else:
            v = np.array([rng.gauss(0, 1) for _ in range(dim)])
            vectors.append(v / np.linalg.norm(v))
    entries = [
        EmbeddedChunk(Chunk(i, f"c{i}", "d", i), v) for i, v in enumerate(vectors)
    ]
    return VectorIndex(entries, dim), vectors


class TestMmr:
    def test_lambda_one_is_topk_cosine(self, rng):
        for _ in range(100):
            index, vectors = _random_index(rng, rng.randint(1, 64), 8)
            q = np.array([rng.gauss(0, 1) for _ in range(8)])
            q /= np.linalg.norm(q)
            k = rng.randint(1, len(index))
            got = [c.id for c in mmr_retrieve(index, q, RetrievalParams(k, 1.0))]
            sims = index.similarities(q)
            expected = sorted(range(len(index)), key=lambda i: (-sims[i], i))[:k]
            assert got == expected

    def test_matches_bruteforce_oracle(self, rng):
        for _ in range(400):
            size = rng.randint(1, 8)
            index, vectors = _random_index(rng, size, 6)
            q = np.array([rng.gauss(0, 1) for _ in range(6)])
            q /= np.linalg.norm(q)
            k = rng.randint(1, min(4, size))
            lam = rng.choice([0.0, 0.25, 0.5, 0.75, 1.0])
            got = [c.id for c in mmr_retrieve(index, q, RetrievalParams(k, lam))]
            expected = mmr_oracle(vectors, list(range(size)), q, k, lam)
            assert got == expected

    def test_redundant_candidate_skipped(self):
        # d2 is nearly collinear with d1 == Q; with relevance weight 0.4 the
        # redundancy penalty beats d2's query similarity, so d3 is picked
        theta = np.radians(5.74)
        entries = [
            EmbeddedChunk(Chunk(0, "d1", "d", 0), np.array([1.0, 0.0])),
            EmbeddedChunk(Chunk(1, "d2", "d", 1), np.array([np.cos(theta), np.sin(theta)])),
            EmbeddedChunk(Chunk(2, "d3", "d", 2), np.array([0.0, 1.0])),
        ]
        index = VectorIndex(entries, 2)
        got = [c.id for c in mmr_retrieve(index, np.array([1.0, 0.0]), RetrievalParams(2, 0.4))]
        assert got == [0, 2]

    def test_no_duplicates_and_selection_order(self, rng):
        index, _ = _random_index(rng, 10, 4)
        q = np.array([1.0, 0, 0, 0])
        chunks = mmr_retrieve(index, q, RetrievalParams(10, 0.5))
        ids = [c.id for c in chunks]
        assert len(set(ids)) == 10

    def test_tie_break_lowest_id(self, embedder):
        v = np.zeros(4)
        v[0] = 1.0
        entries = [EmbeddedChunk(Chunk(i, f"c{i}", "d", i), v.copy()) for i in range(5)]
        index = VectorIndex(entries, 4)
        got = [c.id for c in mmr_retrieve(index, v, RetrievalParams(3, 1.0))]
        assert got == [0, 1, 2]

    def test_errors(self, rng):
        index, _ = _random_index(rng, 4, 4)
        q = np.array([1.0, 0, 0, 0])
        with pytest.raises(InvalidParamsError):
            mmr_retrieve(index, q, RetrievalParams(5, 0.5))  # k > index size
        with pytest.raises(InvalidParamsError):
            mmr_retrieve(index, q, RetrievalParams(2, 1.5))
        with pytest.raises(DimensionError):
            mmr_retrieve(index, np.array([1.0, 0, 0]), RetrievalParams(2, 0.5))
