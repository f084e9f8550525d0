"""Statistics: correlations, bypass summaries, bootstrap intervals."""

from .correlations import (
    CorrelationResult,
    average_ranks,
    kendall,
    pearson,
    spearman,
)
from .summaries import BypassSummary, RunSummary, bootstrap_ci, bypass_rate, mean_sigma

__all__ = [
    "BypassSummary",
    "CorrelationResult",
    "RunSummary",
    "average_ranks",
    "bootstrap_ci",
    "bypass_rate",
    "kendall",
    "mean_sigma",
    "pearson",
    "spearman",
]
