"""Benchmark: compiled extension vs pure-Python kernels on realistic inputs.

The workload mirrors what post-hoc diversity scoring does: pairwise
Levenshtein over payload strings and tree edit distance over parsed payload
trees. Run with:  python3 benchmarks/bench_kernels.py [pairs]
"""

from __future__ import annotations

import random
import sys
import time

from sqlibench.diversity.metrics import payload_tree
from sqlibench.generators import GenerationParams, generate_traditional
from sqlibench.kernels import BACKEND, backends
from sqlibench.kernels.trees import intern_pair
from sqlibench.resources import builtin_catalog_path


def _sample_pairs(n_pairs: int):
    result = generate_traditional(
        builtin_catalog_path(), GenerationParams(n=2 * n_pairs, rng_seed=1)
    )
    texts = [p.text for p in result.payloads]
    return list(zip(texts[::2], texts[1::2]))


def bench_levenshtein(impl, pairs) -> float:
    start = time.perf_counter()
    for a, b in pairs:
        impl.levenshtein(a, b)
    return time.perf_counter() - start


def bench_tree_distance(impl, tree_pairs) -> float:
    start = time.perf_counter()
    for args in tree_pairs:
        impl.tree_edit_distance(*args)
    return time.perf_counter() - start


def main() -> None:
    n_pairs = int(sys.argv[1]) if len(sys.argv) > 1 else 2000
    pairs = _sample_pairs(n_pairs)
    rng = random.Random(7)
    trees = {}
    tree_pairs = []
    for a, b in pairs:
        for text in (a, b):
            if text not in trees:
                trees[text] = payload_tree(text)
        fa, fb = trees[a], trees[b]
        ids_a, ids_b = intern_pair(fa, fb)
        tree_pairs.append(
            (ids_a, list(fa.lld), list(fa.keyroots), ids_b, list(fb.lld), list(fb.keyroots))
        )

    mean_len = sum(len(a) + len(b) for a, b in pairs) / (2 * len(pairs))
    mean_nodes = sum(len(t[0]) for t in tree_pairs) / len(tree_pairs)
    print(f"active backend: {BACKEND}")
    print(f"{n_pairs} payload pairs, mean length {mean_len:.1f} chars, "
          f"mean tree size {mean_nodes:.1f} nodes\n")

    timings: dict[str, dict[str, float]] = {}
    for name, impl in sorted(backends().items()):
        timings[name] = {
            "levenshtein": bench_levenshtein(impl, pairs),
            "tree_edit": bench_tree_distance(impl, tree_pairs),
        }

    header = f"{'kernel':<14}" + "".join(f"{name:>12}" for name in timings)
    if len(timings) > 1:
        header += f"{'speedup':>10}"
    print(header)
    for kernel in ("levenshtein", "tree_edit"):
        row = f"{kernel:<14}"
        values = [timings[name][kernel] for name in timings]
        for value in values:
            row += f"{value * 1000:>10.1f}ms"
        if len(values) > 1:
            row += f"{max(values) / min(values):>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
