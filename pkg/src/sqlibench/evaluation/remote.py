"""Remote WAF probe: one GET per payload, verdict from the status code."""

from __future__ import annotations

from dataclasses import dataclass, field

import requests

from .verdict import BLOCKED, BYPASSED, ERROR, DetectorVerdict


@dataclass
class RemoteWafConfig:
    url: str
    param: str = "q"
    block_statuses: frozenset[int] = frozenset({403, 406})
    pass_statuses: frozenset[int] = frozenset({200})
    timeout_s: float = 10.0
    detector_id: str = "remote-waf"
    extra_params: dict = field(default_factory=dict)


class RemoteWaf:
    def __init__(self, config: RemoteWafConfig, session: requests.Session | None = None):
        self.config = config
        self.session = session or requests.Session()

    @property
    def detector_id(self) -> str:
        return self.config.detector_id

    def evaluate(self, payload: str) -> DetectorVerdict:
        params = dict(self.config.extra_params)
        params[self.config.param] = payload  # requests URL-encodes values
        try:
            resp = self.session.get(
                self.config.url, params=params, timeout=self.config.timeout_s
            )
        except requests.RequestException as exc:
            return DetectorVerdict(self.detector_id, ERROR, f"request failed: {exc}")
        if resp.status_code in self.config.block_statuses:
            return DetectorVerdict(self.detector_id, BLOCKED, str(resp.status_code))
        if resp.status_code in self.config.pass_statuses:
            return DetectorVerdict(self.detector_id, BYPASSED, str(resp.status_code))
        return DetectorVerdict(self.detector_id, ERROR, f"unexpected status {resp.status_code}")
