"""Independent brute-force oracles the fast implementations are checked against.

These deliberately use the most direct formulation of each definition and
share no code with the kernels they verify.
"""

from __future__ import annotations

import itertools
import math


def levenshtein_oracle(a: str, b: str) -> int:
    """Full-matrix unit-cost edit distance DP."""
    rows = len(a) + 1
    cols = len(b) + 1
    d = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        d[i][0] = i
    for j in range(cols):
        d[0][j] = j
    for i in range(1, rows):
        for j in range(1, cols):
            d[i][j] = min(
                d[i - 1][j] + 1,
                d[i][j - 1] + 1,
                d[i - 1][j - 1] + (a[i - 1] != b[j - 1]),
            )
    return d[rows - 1][cols - 1]


def jaccard_ngram_oracle(a: str, b: str, sizes=(2, 3, 4)) -> float:
    """Jaccard distance over explicitly constructed combined gram sets."""
    def grams(text: str) -> set:
        out = set()
        for size in sizes:
            for i in range(len(text) - size + 1):
                out.add(text[i : i + size])
        return out

    ga, gb = grams(a), grams(b)
    union = ga | gb
    if not union:
        return 0.0
    return 1.0 - len(ga & gb) / len(union)


def _tree_size(tree) -> int:
    return 1 + sum(_tree_size(c) for c in tree[1])


def tree_edit_oracle(t1, t2) -> int:
    """Exhaustive forest edit distance via the rightmost-root recursion.

    Trees are (label, children-tuple) pairs; unit insert/delete/relabel costs.
    """
    memo: dict = {}

    def forest_size(forest) -> int:
        return sum(_tree_size(t) for t in forest)

    def dist(f1, f2) -> int:
        if not f1 and not f2:
            return 0
        key = (f1, f2)
        if key in memo:
            return memo[key]
        if not f1:
            result = forest_size(f2)
        elif not f2:
            result = forest_size(f1)
        else:
            rest1, (label1, kids1) = f1[:-1], f1[-1]
            rest2, (label2, kids2) = f2[:-1], f2[-1]
            delete = dist(rest1 + kids1, f2) + 1
            insert = dist(f1, rest2 + kids2) + 1
            match = dist(kids1, kids2) + dist(rest1, rest2) + (label1 != label2)
            result = min(delete, insert, match)
        memo[key] = result
        return result

    return dist((t1,), (t2,))


def kendall_exact_p_oracle(x: list[float], y: list[float]) -> float:
    """Two-sided exact p by enumerating all n! orderings (distinct values only)."""
    n = len(x)

    def s_statistic(xs, ys) -> int:
        s = 0
        for i in range(n):
            for j in range(i + 1, n):
                s += int(math.copysign(1, (xs[i] - xs[j]) * (ys[i] - ys[j])))
        return s

    observed = abs(s_statistic(x, y))
    hits = 0
    total = 0
    for perm in itertools.permutations(range(n)):
        total += 1
        if abs(s_statistic(list(range(n)), perm)) >= observed:
            hits += 1
    return hits / total


def mmr_oracle(vectors, ids, query_vec, k: int, lam: float) -> list[int]:
    """Greedy MMR re-scoring every remaining candidate from scratch per step."""
    import numpy as np

    selected: list[int] = []
    remaining = list(range(len(vectors)))
    for _ in range(k):
        best = None
        best_key = None
        for cand in remaining:
            score = lam * float(np.dot(vectors[cand], query_vec))
            if selected:
                redundancy = max(
                    float(np.dot(vectors[cand], vectors[s])) for s in selected
                )
                score -= (1.0 - lam) * redundancy
            key = (score, -ids[cand])
            if best_key is None or key > best_key:
                best_key = key
                best = cand
        selected.append(best)
        remaining.remove(best)
    return selected
