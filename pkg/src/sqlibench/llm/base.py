"""Chat-completion provider interface and registry."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol

from ..errors import ConfigError


@dataclass(frozen=True)
class ChatRequest:
    provider_id: str
    prompt: str
    temperature: float = 0.7
    max_output_chars: int = 8000
    seed: int = 0  # consumed by the mock provider only

    def __post_init__(self):
        if not self.prompt:
            raise ConfigError("prompt must be non-empty")
        if not 0.0 <= self.temperature <= 2.0:
            raise ConfigError(f"temperature {self.temperature} outside [0, 2]")
        if self.max_output_chars < 1:
            raise ConfigError("max_output_chars must be positive")


@dataclass(frozen=True)
class ChatResponse:
    text: str
    provider_id: str
    latency_ms: int


class ChatProvider(Protocol):
    provider_id: str

    def complete(self, request: ChatRequest) -> ChatResponse:
        """Return a non-empty completion, or raise RefusalError/ProviderError."""
        ...


class ProviderRegistry:
    def __init__(self):
        self._providers: dict[str, ChatProvider] = {}

    def register(self, provider: ChatProvider) -> None:
        self._providers[provider.provider_id] = provider

    def get(self, provider_id: str) -> ChatProvider:
        provider = self._providers.get(provider_id)
        if provider is None:
            raise ConfigError(
                f"provider {provider_id!r} is not registered "
                f"(known: {', '.join(sorted(self._providers)) or 'none'})"
            )
        return provider

    def __contains__(self, provider_id: str) -> bool:
        return provider_id in self._providers
