"""Functional classification of execution outcomes.

Maps every ExecutionOutcome to exactly one behavior category, then extends
it with error-class, row-count bucket, and delay bucket so that sets of
payloads produce informative distinct-behavior counts.
"""

from __future__ import annotations

from dataclasses import dataclass

from .executor import DIALECT_ERROR_CLASSES, ExecutionOutcome

TIME_DELAY_THRESHOLD_MS = 2000

DATA_EXTRACTION = "data_extraction"
TIME_DELAY = "time_delay"
SQL_ERROR = "sql_error"
NO_EFFECT = "no_effect"
INCOMPATIBLE = "incompatible"


@dataclass(frozen=True)
class FunctionalSignature:
    category: str
    error_class: str
    row_bucket: str  # 0 | 1 | 2-10 | >10
    delay_bucket: str  # <2s | >=2s


def _row_bucket(count: int) -> str:
    if count == 0:
        return "0"
    if count == 1:
        return "1"
    if count <= 10:
        return "2-10"
    return ">10"


def classify_functional(outcome: ExecutionOutcome, payload: str = "") -> FunctionalSignature:
    delay_bucket = ">=2s" if outcome.elapsed_ms >= TIME_DELAY_THRESHOLD_MS else "<2s"
    rows = outcome.row_count if outcome.status == "executed" else 0
    row_bucket = _row_bucket(rows)

    if outcome.status == "timeout" or outcome.elapsed_ms >= TIME_DELAY_THRESHOLD_MS:
        category = TIME_DELAY
    elif outcome.status == "sql_error" and outcome.error_class in DIALECT_ERROR_CLASSES:
        category = INCOMPATIBLE
    elif outcome.status == "sql_error":
        category = SQL_ERROR
    elif outcome.row_count > outcome.baseline_row_count:
        category = DATA_EXTRACTION
    else:
        category = NO_EFFECT
    return FunctionalSignature(category, outcome.error_class, row_bucket, delay_bucket)
