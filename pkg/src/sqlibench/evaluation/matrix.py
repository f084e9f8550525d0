"""Payload x detector evaluation matrix."""

from __future__ import annotations

import csv
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from ..errors import EmptyInputError, InfrastructureError
from .classify import FunctionalSignature, classify_functional
from .executor import EmbeddedExecutor, ExecutionOutcome
from .verdict import BLOCKED, BYPASSED, ERROR, DetectorVerdict, EvaluationRecord

log = logging.getLogger(__name__)

CSV_COLUMNS = ("payload_id", "detector_id", "outcome", "detail", "elapsed_ms")


@dataclass(frozen=True)
class MatrixResult:
    records: list[EvaluationRecord]
    outcomes: list[ExecutionOutcome] | None  # aligned with payloads; None without executor
    signatures: list[FunctionalSignature] | None


def run_evaluation_matrix(
    payloads: list[str],
    detectors: list,
    executor: EmbeddedExecutor | None = None,
    store_path: str | None = None,
    workers: int | None = None,
) -> MatrixResult:
    """Evaluate every payload against every detector (payload-major order).

    When an executor is configured each payload additionally gets one
    execution record and a functional signature. Recorded elapsed times are
    the executor's simulated values; wall-clock timings stay out of the
    artifacts so repeated runs are byte-identical.
    """
    if not detectors and executor is None:
        raise EmptyInputError("need at least one detector")
    records: list[EvaluationRecord] = []
    outcomes: list[ExecutionOutcome] = []
    signatures: list[FunctionalSignature] = []

    writer = None
    fh = None
    if store_path:
        fh = open(store_path, "w", newline="", encoding="utf-8")
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)

    pool = ThreadPoolExecutor(max_workers=workers or max(len(detectors), 1))
    try:
        for idx, payload in enumerate(payloads):
            payload_id = str(idx)
            verdicts = list(pool.map(lambda d: _safe_evaluate(d, payload), detectors))
            for verdict in verdicts:
                record = EvaluationRecord(payload_id, verdict.detector_id, verdict.outcome,
                                          verdict.detail, 0)
                records.append(record)
                if writer:
                    writer.writerow(_row(record))
            if executor is not None:
                outcome = executor.run_payload(payload)
                outcomes.append(outcome)
                signatures.append(classify_functional(outcome, payload))
                record = EvaluationRecord(
                    payload_id,
                    executor.detector_id,
                    BYPASSED if outcome.status == "executed" else BLOCKED,
                    _exec_detail(outcome),
                    outcome.elapsed_ms,
                )
                records.append(record)
                if writer:
                    writer.writerow(_row(record))
    finally:
        pool.shutdown()
        if fh:
            fh.close()

    return MatrixResult(
        records,
        outcomes if executor is not None else None,
        signatures if executor is not None else None,
    )


def _row(record: EvaluationRecord) -> tuple:
    return (record.payload_id, record.detector_id, record.outcome, record.detail,
            record.elapsed_ms)


def _safe_evaluate(detector, payload: str) -> DetectorVerdict:
    try:
        return detector.evaluate(payload)
    except InfrastructureError:
        raise
    except Exception as exc:  # isolate per-cell detector faults
        log.warning("detector %s failed on payload: %s", detector.detector_id, exc)
        return DetectorVerdict(detector.detector_id, ERROR, f"detector error: {exc}")


def _exec_detail(outcome: ExecutionOutcome) -> str:
    if outcome.status == "executed":
        return f"executed rows={outcome.row_count}"
    if outcome.status == "timeout":
        return "timeout"
    return f"sql_error:{outcome.error_class}"
