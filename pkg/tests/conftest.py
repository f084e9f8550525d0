from __future__ import annotations

import random

import pytest

from sqlibench.errors import RefusalError
from sqlibench.knowledge.embedding import HashedNgramEmbedder
from sqlibench.llm.base import ChatRequest, ChatResponse
from sqlibench.llm.mock import MockProvider


@pytest.fixture()
def embedder():
    return HashedNgramEmbedder()


@pytest.fixture()
def mock_provider():
    return MockProvider()


class ConstantScoreProvider:
    """Discriminator stub: every scoring request gets the same integer."""

    def __init__(self, score: int, provider_id: str = "const-disc"):
        self.provider_id = provider_id
        self.score = score
        self.calls = 0

    def complete(self, request: ChatRequest) -> ChatResponse:
        self.calls += 1
        return ChatResponse(f"{self.score}/10: fixed verdict.", self.provider_id, 0)


class RefusingProvider:
    """Provider that declines every request."""

    provider_id = "refuser"

    def __init__(self):
        self.calls = 0

    def complete(self, request: ChatRequest) -> ChatResponse:
        self.calls += 1
        raise RefusalError("cannot assist with that", self.provider_id)


class ScriptedProvider:
    """Returns canned responses in order, then repeats the last one."""

    provider_id = "scripted"

    def __init__(self, responses: list[str]):
        self.responses = responses
        self.calls = 0

    def complete(self, request: ChatRequest) -> ChatResponse:
        text = self.responses[min(self.calls, len(self.responses) - 1)]
        self.calls += 1
        return ChatResponse(text, self.provider_id, 0)


@pytest.fixture()
def rng():
    return random.Random(0xC0FFEE)


def random_tree(rng: random.Random, max_nodes: int, labels: str = "abc"):
    """Random ordered tree as nested (label, children-tuple) pairs."""
    n = rng.randint(1, max_nodes)
    children: dict[int, list[int]] = {i: [] for i in range(n)}
    for i in range(1, n):
        children[rng.randrange(i)].append(i)
    node_labels = [rng.choice(labels) for _ in range(n)]

    def build(i: int):
        return (node_labels[i], tuple(build(c) for c in children[i]))

    return build(0)
