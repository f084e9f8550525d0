"""Detector verdict and evaluation record types."""

from __future__ import annotations

from dataclasses import dataclass

BLOCKED = "blocked"
BYPASSED = "bypassed"
ERROR = "error"


@dataclass(frozen=True)
class DetectorVerdict:
    detector_id: str
    outcome: str  # blocked | bypassed | error
    detail: str = ""


@dataclass(frozen=True)
class EvaluationRecord:
    payload_id: str
    detector_id: str
    outcome: str
    detail: str
    elapsed_ms: int
