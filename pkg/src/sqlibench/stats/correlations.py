"""Pearson, Spearman, and Kendall correlations with p-values.

Methods pinned by what reproduces the reference analysis:

* Pearson/Spearman p-values via the two-sided t transform,
  ``t = r * sqrt((n-2) / (1 - r^2))`` with n-2 degrees of freedom;
* Kendall tau-b with an exact two-sided p from the full permutation
  distribution of concordances for n <= 10 without ties, a normal
  approximation with continuity correction (tie-adjusted variance)
  otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import stdtr

from ..errors import DegenerateInputError, InvalidParamsError

EXACT_KENDALL_MAX_N = 10


@dataclass(frozen=True)
class CorrelationResult:
    method: str  # pearson | spearman | kendall
    coefficient: float
    p_value: float
    n: int


def _validate(x, y) -> tuple[np.ndarray, np.ndarray]:
    xs = np.asarray(x, dtype=np.float64)
    ys = np.asarray(y, dtype=np.float64)
    if xs.shape != ys.shape or xs.ndim != 1:
        raise InvalidParamsError("x and y must be 1-D and the same length")
    if len(xs) < 3:
        raise InvalidParamsError(f"need n >= 3, got {len(xs)}")
    if np.ptp(xs) == 0 or np.ptp(ys) == 0:
        raise DegenerateInputError("constant input has no defined correlation")
    return xs, ys


def _t_pvalue(r: float, n: int) -> float:
    if abs(r) >= 1.0:
        return 0.0
    t = r * math.sqrt((n - 2) / (1.0 - r * r))
    return 2.0 * float(stdtr(n - 2, -abs(t)))


def pearson(x, y) -> CorrelationResult:
    xs, ys = _validate(x, y)
    n = len(xs)
    xc = xs - xs.mean()
    yc = ys - ys.mean()
    r = float(xc @ yc / math.sqrt((xc @ xc) * (yc @ yc)))
    r = min(max(r, -1.0), 1.0)
    return CorrelationResult("pearson", r, _t_pvalue(r, n), n)


def average_ranks(values: np.ndarray) -> np.ndarray:
    """Ranks 1..n with ties assigned their average rank."""
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values), dtype=np.float64)
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def spearman(x, y) -> CorrelationResult:
    xs, ys = _validate(x, y)
    inner = pearson(average_ranks(xs), average_ranks(ys))
    return CorrelationResult("spearman", inner.coefficient, inner.p_value, len(xs))


@lru_cache(maxsize=32)
def _inversion_counts(n: int) -> tuple[int, ...]:
    """Number of permutations of n items with k inversions, k = 0..n(n-1)/2."""
    counts = [1]
    for m in range(2, n + 1):
        prev = counts
        size = len(prev) + (m - 1)
        nxt = [0] * size
        running = 0
        for k in range(size):
            running += prev[k] if k < len(prev) else 0
            if k - m >= 0:
                running -= prev[k - m]
            nxt[k] = running
        counts = nxt
    return tuple(counts)


def _kendall_exact_p(s_obs: int, n: int) -> float:
    """Two-sided P(|S| >= |s_obs|) under the null, S = concordant - discordant."""
    counts = _inversion_counts(n)
    m = n * (n - 1) // 2
    total = math.factorial(n)
    hits = sum(count for d, count in enumerate(counts) if abs(m - 2 * d) >= abs(s_obs))
    return min(hits / total, 1.0)


def kendall(x, y) -> CorrelationResult:
    xs, ys = _validate(x, y)
    n = len(xs)

    concordant = discordant = 0
    ties_x = ties_y = 0
    for i in range(n):
        for j in range(i + 1, n):
            dx = xs[i] - xs[j]
            dy = ys[i] - ys[j]
            if dx == 0 and dy == 0:
                ties_x += 1
                ties_y += 1
            elif dx == 0:
                ties_x += 1
            elif dy == 0:
                ties_y += 1
            elif dx * dy > 0:
                concordant += 1
            else:
                discordant += 1

    n0 = n * (n - 1) // 2
    s = concordant - discordant
    denom = math.sqrt((n0 - ties_x) * (n0 - ties_y))
    if denom == 0:
        raise DegenerateInputError("all pairs tied")
    tau = s / denom
    tau = min(max(tau, -1.0), 1.0)

    has_ties = ties_x > 0 or ties_y > 0
    if not has_ties and n <= EXACT_KENDALL_MAX_N:
        p = _kendall_exact_p(s, n)
    else:
        p = _kendall_normal_p(xs, ys, s)
    return CorrelationResult("kendall", tau, p, n)


def _kendall_normal_p(xs: np.ndarray, ys: np.ndarray, s: int) -> float:
    n = len(xs)

    def tie_sizes(values: np.ndarray) -> list[int]:
        _, counts = np.unique(values, return_counts=True)
        return [int(c) for c in counts if c > 1]

    tx = tie_sizes(xs)
    ty = tie_sizes(ys)
    v0 = n * (n - 1) * (2 * n + 5)
    vt = sum(t * (t - 1) * (2 * t + 5) for t in tx)
    vu = sum(u * (u - 1) * (2 * u + 5) for u in ty)
    v1 = (
        sum(t * (t - 1) for t in tx)
        * sum(u * (u - 1) for u in ty)
        / (2.0 * n * (n - 1))
    )
    v2 = 0.0
    if n > 2:
        v2 = (
            sum(t * (t - 1) * (t - 2) for t in tx)
            * sum(u * (u - 1) * (u - 2) for u in ty)
            / (9.0 * n * (n - 1) * (n - 2))
        )
    var = (v0 - vt - vu) / 18.0 + v1 + v2
    if var <= 0:
        return 1.0
    z = (abs(s) - 1) / math.sqrt(var)  # continuity correction toward zero
    z = max(z, 0.0)
    return float(math.erfc(z / math.sqrt(2.0)))
