"""Remote chat provider speaking the OpenAI-compatible chat completions schema."""

from __future__ import annotations

import logging
import os
import threading
import time
from dataclasses import dataclass

import requests

from ..errors import ConfigError, ProviderError, RefusalError
from .base import ChatRequest, ChatResponse

log = logging.getLogger(__name__)

MAX_ATTEMPTS = 3
BACKOFF_START_S = 1.0
REQUEST_TIMEOUT_S = 60.0


@dataclass(frozen=True)
class RemoteProviderConfig:
    provider_id: str
    endpoint: str
    model: str
    auth_env: str  # name of the env var holding the bearer token
    max_in_flight: int = 4


class RemoteProvider:
    def __init__(self, config: RemoteProviderConfig, session: requests.Session | None = None):
        self.config = config
        self.provider_id = config.provider_id
        self.session = session or requests.Session()
        self._gate = threading.BoundedSemaphore(config.max_in_flight)

    def _headers(self) -> dict[str, str]:
        token = os.environ.get(self.config.auth_env, "")
        if not token:
            raise ConfigError(
                f"provider {self.provider_id}: auth env var {self.config.auth_env} is unset"
            )
        return {"Authorization": f"Bearer {token}", "Content-Type": "application/json"}

    def complete(self, request: ChatRequest) -> ChatResponse:
        body = {
            "model": self.config.model,
            "messages": [{"role": "user", "content": request.prompt}],
            "temperature": request.temperature,
        }
        last_error: Exception | None = None
        for attempt in range(MAX_ATTEMPTS):
            if attempt:
                time.sleep(BACKOFF_START_S * 2 ** (attempt - 1))
            started = time.monotonic()
            try:
                with self._gate:
                    resp = self.session.post(
                        self.config.endpoint,
                        json=body,
                        headers=self._headers(),
                        timeout=REQUEST_TIMEOUT_S,
                    )
            except requests.RequestException as exc:
                last_error = exc
                log.warning("provider %s attempt %d failed: %s", self.provider_id, attempt + 1, exc)
                continue
            latency_ms = int((time.monotonic() - started) * 1000)
            if resp.status_code in (429, 500, 502, 503, 504):
                last_error = ProviderError(f"HTTP {resp.status_code}")
                continue
            if resp.status_code != 200:
                raise ProviderError(
                    f"provider {self.provider_id}: HTTP {resp.status_code}: {resp.text[:200]}"
                )
            return self._parse(resp.json(), latency_ms)
        raise ProviderError(
            f"provider {self.provider_id}: {MAX_ATTEMPTS} attempts failed ({last_error})"
        )

    def _parse(self, data: dict, latency_ms: int) -> ChatResponse:
        try:
            choice = data["choices"][0]
            text = choice["message"]["content"] or ""
            finish = choice.get("finish_reason", "")
        except (KeyError, IndexError, TypeError) as exc:
            raise ProviderError(f"provider {self.provider_id}: malformed response") from exc
        if finish == "content_filter" or not text.strip():
            raise RefusalError(
                f"provider declined (finish_reason={finish or 'empty'})", self.provider_id
            )
        return ChatResponse(text, self.provider_id, latency_ms)


def load_provider_configs(path: str) -> list[RemoteProviderConfig]:
    """Provider config file: JSON list with provider_id/endpoint/model/auth_env."""
    import json

    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot load provider config {path}: {exc}") from exc
    configs = []
    for item in raw:
        try:
            configs.append(
                RemoteProviderConfig(
                    provider_id=item["provider_id"],
                    endpoint=item["endpoint"],
                    model=item["model"],
                    auth_env=item["auth_env"],
                    max_in_flight=int(item.get("max_in_flight", 4)),
                )
            )
        except KeyError as exc:
            raise ConfigError(f"provider config missing field {exc}") from exc
    return configs
