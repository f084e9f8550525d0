"""Pluggable ML-score detector stub.

Scores a payload from weighted character n-gram evidence:
``score = 1 - exp(-sum of weights over gram occurrences)``, clamped to
[0, 1] by construction, blocked at ``score >= threshold``. The weight file
is the model; swapping it swaps the detector.
"""

from __future__ import annotations

import json
import math

from ..errors import ConfigError
from .verdict import BLOCKED, BYPASSED, DetectorVerdict


class MlStubWaf:
    detector_id = "ml-stub"

    def __init__(self, weights: dict[str, float], threshold: float = 0.5, gram_size: int = 3):
        self.weights = dict(weights)
        self.threshold = threshold
        self.gram_size = gram_size

    @classmethod
    def from_file(cls, path: str) -> "MlStubWaf":
        try:
            with open(path, encoding="utf-8") as fh:
                raw = json.load(fh)
            weights = {str(k): float(v) for k, v in raw["weights"].items()}
            threshold = float(raw.get("threshold", 0.5))
            gram_size = int(raw.get("gram_size", 3))
        except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"cannot load ML weight file {path}: {exc}") from exc
        return cls(weights, threshold, gram_size)

    def score(self, payload: str) -> float:
        text = payload.lower()
        if len(text) < self.gram_size:
            grams = [text]
        else:
            grams = [text[i : i + self.gram_size] for i in range(len(text) - self.gram_size + 1)]
        evidence = sum(self.weights.get(g, 0.0) for g in grams)
        if evidence <= 0:
            return 0.0
        return 1.0 - math.exp(-evidence)

    def evaluate(self, payload: str) -> DetectorVerdict:
        score = self.score(payload)
        outcome = BLOCKED if score >= self.threshold else BYPASSED
        return DetectorVerdict(self.detector_id, outcome, f"score={score:.4f}")
