"""Bypass-rate aggregation, run summaries, and bootstrap intervals."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import InvalidParamsError, NoDataError
from ..evaluation.verdict import BYPASSED, ERROR, EvaluationRecord


@dataclass(frozen=True)
class BypassSummary:
    detector_id: str
    bypassed: int
    tested: int  # error records excluded
    rate_pct: float


@dataclass(frozen=True)
class RunSummary:
    config_digest: str
    rates: tuple[float, ...]
    mean_pct: float
    sigma_pct: float | None  # undefined for a single run


def bypass_rate(records: list[EvaluationRecord], detector_id: str) -> BypassSummary:
    tested = 0
    bypassed = 0
    for record in records:
        if record.detector_id != detector_id or record.outcome == ERROR:
            continue
        tested += 1
        if record.outcome == BYPASSED:
            bypassed += 1
    if tested == 0:
        raise NoDataError(f"no non-error records for detector {detector_id}")
    return BypassSummary(detector_id, bypassed, tested, 100.0 * bypassed / tested)


def mean_sigma(rates: list[float]) -> tuple[float, float | None]:
    """Arithmetic mean and sample standard deviation (n-1 denominator)."""
    if not rates:
        raise NoDataError("no rates to summarize")
    mean = sum(rates) / len(rates)
    if len(rates) == 1:
        return mean, None
    var = sum((r - mean) ** 2 for r in rates) / (len(rates) - 1)
    return mean, math.sqrt(var)


def bootstrap_ci(
    samples: list[float], b: int = 10000, alpha: float = 0.05, seed: int = 0
) -> tuple[float, float]:
    """Percentile bootstrap CI for the mean.

    Each resample derives its own RNG from (seed, resample index), so the
    result does not depend on how resamples are scheduled across workers.
    """
    if len(samples) < 2:
        raise NoDataError(f"need >= 2 samples, got {len(samples)}")
    if b < 100:
        raise InvalidParamsError(f"need b >= 100 resamples, got {b}")
    data = np.asarray(samples, dtype=np.float64)
    n = len(data)
    means = np.empty(b, dtype=np.float64)
    for i in range(b):
        rng = np.random.default_rng([seed, i])
        means[i] = data[rng.integers(0, n, n)].mean()
    lo = float(np.quantile(means, alpha / 2.0))
    hi = float(np.quantile(means, 1.0 - alpha / 2.0))
    return lo, hi
