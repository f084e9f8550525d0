"""Signature rule engine with CRS-style paranoia levels.

Rules live in a JSON file (rule_id, pattern, paranoia_level, description) and
are evaluated in file order against the once-URL-decoded payload and its
lowercased copy. A detector at paranoia level PL applies every rule with
level <= PL, which makes blocking monotone in PL by construction.
"""

from __future__ import annotations

import json
import re
import urllib.parse
from dataclasses import dataclass

from ..errors import ConfigError
from .verdict import BLOCKED, BYPASSED, DetectorVerdict


@dataclass(frozen=True)
class WafRule:
    rule_id: str
    pattern: str
    paranoia_level: int
    description: str
    compiled: re.Pattern


def load_ruleset(path: str) -> list[WafRule]:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot load ruleset {path}: {exc}") from exc
    rules = []
    for item in raw:
        level = int(item["paranoia_level"])
        if not 1 <= level <= 3:
            raise ConfigError(f"rule {item['rule_id']}: paranoia_level {level} outside 1..3")
        try:
            compiled = re.compile(item["pattern"])
        except re.error as exc:
            raise ConfigError(f"rule {item['rule_id']}: bad pattern: {exc}") from exc
        rules.append(
            WafRule(item["rule_id"], item["pattern"], level, item.get("description", ""), compiled)
        )
    return rules


class RuleWaf:
    """One ruleset evaluated at a fixed paranoia level."""

    def __init__(self, rules: list[WafRule], paranoia_level: int, detector_id: str | None = None):
        if not 1 <= paranoia_level <= 3:
            raise ConfigError(f"paranoia_level {paranoia_level} outside 1..3")
        self.rules = rules
        self.paranoia_level = paranoia_level
        self.detector_id = detector_id or f"rule-pl{paranoia_level}"

    def evaluate(self, payload: str) -> DetectorVerdict:
        decoded = urllib.parse.unquote(payload)
        lowered = decoded.lower()
        for rule in self.rules:
            if rule.paranoia_level > self.paranoia_level:
                continue
            if rule.compiled.search(decoded) or rule.compiled.search(lowered):
                return DetectorVerdict(self.detector_id, BLOCKED, rule.rule_id)
        return DetectorVerdict(self.detector_id, BYPASSED, "")
