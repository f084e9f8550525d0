"""Pure-Python implementations of the hot distance kernels.

Selected automatically when the compiled extension is unavailable. The
function signatures match ``_speedups`` exactly.
"""

from __future__ import annotations


def levenshtein(a: str, b: str) -> int:
    """Unit-cost edit distance over Unicode scalar values (two-row DP)."""
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    cur = [0] * (len(b) + 1)
    for i, ca in enumerate(a, 1):
        cur[0] = i
        for j, cb in enumerate(b, 1):
            cost = prev[j - 1] + (ca != cb)
            d = prev[j] + 1
            ins = cur[j - 1] + 1
            if d < cost:
                cost = d
            if ins < cost:
                cost = ins
            cur[j] = cost
        prev, cur = cur, prev
    return prev[len(b)]


def tree_edit_distance(
    labels1: list[int],
    lld1: list[int],
    keyroots1: list[int],
    labels2: list[int],
    lld2: list[int],
    keyroots2: list[int],
) -> int:
    """Ordered-tree edit distance with unit insert/delete/relabel costs.

    Inputs are post-order flattenings: interned integer labels, the
    leftmost-leaf-descendant index of every node, and the keyroot indices
    in ascending order (see :mod:`sqlibench.kernels.trees`).
    """
    n1 = len(labels1)
    n2 = len(labels2)
    td = [[0] * n2 for _ in range(n1)]
    for i in keyroots1:
        for j in keyroots2:
            _treedist(i, j, labels1, lld1, labels2, lld2, td)
    return td[n1 - 1][n2 - 1]


def _treedist(i, j, labels1, lld1, labels2, lld2, td):
    li = lld1[i]
    lj = lld2[j]
    m = i - li + 2
    n = j - lj + 2
    ioff = li - 1
    joff = lj - 1
    fd = [[0] * n for _ in range(m)]
    for x in range(1, m):
        fd[x][0] = fd[x - 1][0] + 1
    for y in range(1, n):
        fd[0][y] = fd[0][y - 1] + 1
    for x in range(1, m):
        for y in range(1, n):
            if lld1[x + ioff] == li and lld2[y + joff] == lj:
                cost = 0 if labels1[x + ioff] == labels2[y + joff] else 1
                best = fd[x - 1][y - 1] + cost
                d = fd[x - 1][y] + 1
                ins = fd[x][y - 1] + 1
                if d < best:
                    best = d
                if ins < best:
                    best = ins
                fd[x][y] = best
                td[x + ioff][y + joff] = best
            else:
                p = lld1[x + ioff] - 1 - ioff
                q = lld2[y + joff] - 1 - joff
                best = fd[p][q] + td[x + ioff][y + joff]
                d = fd[x - 1][y] + 1
                ins = fd[x][y - 1] + 1
                if d < best:
                    best = d
                if ins < best:
                    best = ins
                fd[x][y] = best
