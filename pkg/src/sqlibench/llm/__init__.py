"""LLM gateway: providers, prompt templates, payload extraction."""

from .base import ChatProvider, ChatRequest, ChatResponse, ProviderRegistry
from .extract import extract_payloads, format_payload_list
from .mock import CATALOG, MockProvider, score_payload
from .prompts import (
    SINGLE_PAYLOAD_CONTRACT,
    TEMPLATES,
    format_context_block,
    format_recent_block,
    format_seed_block,
    render_prompt,
)
from .remote import RemoteProvider, RemoteProviderConfig, load_provider_configs

__all__ = [
    "CATALOG",
    "ChatProvider",
    "ChatRequest",
    "ChatResponse",
    "MockProvider",
    "ProviderRegistry",
    "RemoteProvider",
    "RemoteProviderConfig",
    "SINGLE_PAYLOAD_CONTRACT",
    "TEMPLATES",
    "extract_payloads",
    "format_context_block",
    "format_payload_list",
    "format_recent_block",
    "format_seed_block",
    "load_provider_configs",
    "render_prompt",
    "score_payload",
]
