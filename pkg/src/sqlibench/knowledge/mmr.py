"""Greedy maximum marginal relevance retrieval over a vector index."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidParamsError
from .chunking import Chunk
from .index import VectorIndex


@dataclass(frozen=True)
class RetrievalParams:
    k: int = 3
    lambda_: float = 0.5  # relevance weight; 1 - lambda_ weights diversity

    def validate(self, index_size: int) -> None:
        if self.k < 1 or self.k > index_size:
            raise InvalidParamsError(f"k={self.k} outside 1..{index_size}")
        if not 0.0 <= self.lambda_ <= 1.0:
            raise InvalidParamsError(f"lambda={self.lambda_} outside [0, 1]")


def mmr_retrieve(
    index: VectorIndex, query_vec: np.ndarray, params: RetrievalParams
) -> list[Chunk]:
    """Select k chunks greedily by relevance-minus-redundancy.

    Each step picks the remaining candidate maximizing
    ``lambda * cos(d, Q) - (1 - lambda) * max_selected cos(d, s)``; the
    redundancy term is 0 while nothing is selected. Exact score ties go to
    the lowest chunk id.
    """
    params.validate(len(index))
    query_sims = index.similarities(query_vec)
    matrix = index._matrix

    selected: list[int] = []
    remaining = list(range(len(index)))
    max_sim_to_selected = np.full(len(index), -np.inf, dtype=np.float64)

    for _ in range(params.k):
        best_pos = None
        best_score = None
        best_id = None
        for pos, cand in enumerate(remaining):
            score = params.lambda_ * query_sims[cand]
            if selected:
                score -= (1.0 - params.lambda_) * max_sim_to_selected[cand]
            cand_id = index.entries[cand].chunk.id
            if best_score is None or score > best_score or (score == best_score and cand_id < best_id):
                best_score = score
                best_pos = pos
                best_id = cand_id
        chosen = remaining.pop(best_pos)
        selected.append(chosen)
        sims_to_chosen = matrix @ matrix[chosen]
        np.maximum(max_sim_to_selected, sims_to_chosen, out=max_sim_to_selected)

    return [index.entries[i].chunk for i in selected]
